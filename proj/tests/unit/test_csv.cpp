#include <gtest/gtest.h>

#include <ihoc/adjoint.hpp>
#include <ihoc/csv.hpp>
#include <ihoc/errors.hpp>
#include <ihoc/solver.hpp>

#include "fixtures.hpp"

#include <sstream>

using namespace ihoc;

TEST(Csv, ProcessRoundTrip) {
  const Process p = lq_closed_loop(ihoc::testing::reference_lq(), 12);
  std::stringstream ss;
  csv::write_process(ss, p);
  const Process back = csv::read_process(ss);
  EXPECT_EQ(back.states, p.states);
  EXPECT_EQ(back.controls, p.controls);
}

TEST(Csv, ProcessHeaderAndLastRow) {
  Process p;
  p.states = {Vec::Constant(1, 1.0), Vec::Constant(1, 0.5)};
  p.controls = {Vec::Constant(1, 0.25)};
  std::stringstream ss;
  csv::write_process(ss, p);
  EXPECT_EQ(ss.str(), "t,x_0,u_0\n0,1,0.25\n1,0.5,\n");
}

TEST(Csv, MalformedInput) {
  std::stringstream bad("t,x_0,u_0\n0,abc,1\n1,0,\n");
  EXPECT_THROW((void)csv::read_process(bad), Error);
  std::stringstream gap("t,x_0,u_0\n0,1,1\n2,0,\n");
  EXPECT_THROW((void)csv::read_process(gap), Error);
}

TEST(Csv, Costates) {
  const LQParams prm = ihoc::testing::reference_lq();
  const ReducedProblem red = ihoc::testing::lq_problem(prm);
  const CostateSeq c = compute_costates(red, lq_closed_loop(prm, 3));
  std::stringstream ss;
  csv::write_costates(ss, c);
  std::string header;
  std::getline(ss, header);
  EXPECT_EQ(header, "t,p_0,norm");
  int rows = 0;
  for (std::string line; std::getline(ss, line);) {
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Csv, Trace) {
  std::stringstream ss;
  csv::write_trace(ss, {{0, -1.5, 0.1, 1.0}, {1, -1.25, 0.01, 1.1}});
  EXPECT_EQ(ss.str(), "iteration,objective,grad_norm,step\n0,-1.5,0.1,1\n1,-1.25,0.01,1.1\n");
}

TEST(Csv, FormatRoundTrips) {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345678.9}) {
    EXPECT_EQ(std::stod(csv::format_double(v)), v);
  }
}
