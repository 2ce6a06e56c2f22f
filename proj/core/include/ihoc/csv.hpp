#pragma once

#include "ihoc/adjoint.hpp"
#include "ihoc/linalg.hpp"
#include "ihoc/process.hpp"
#include "ihoc/solver.hpp"

#include <iosfwd>
#include <string>

namespace ihoc::csv {

/// Columns: t, v_0..v_{k-1}.
void write_sequence(std::ostream& os, const Sequence& seq, const std::string& prefix = "v");

/// Columns: t, x_0..x_{n-1}, u_0..u_{d-1}. The row at t = T has empty control cells.
void write_process(std::ostream& os, const Process& proc);

/// Inverse of write_process.
Process read_process(std::istream& is, TailConvention tail = TailConvention::StatesToZero);

/// Columns: t, p_0..p_{n-1}, norm.
void write_costates(std::ostream& os, const CostateSeq& costates);

/// Columns: iteration, objective, grad_norm, step.
void write_trace(std::ostream& os, const std::vector<TraceEntry>& trace);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace ihoc::csv
