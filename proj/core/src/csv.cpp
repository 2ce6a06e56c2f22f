#include "ihoc/csv.hpp"

#include "ihoc/errors.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace ihoc::csv {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) {
    throw Error("failed to format number");
  }
  return {buf, end};
}

namespace {

void write_row(std::ostream& os, int t, const Vec& v) {
  os << t;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << ',' << format_double(v[i]);
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("malformed number in CSV: '" + s + "'");
  }
  return v;
}

}  // namespace

void write_sequence(std::ostream& os, const Sequence& seq, const std::string& prefix) {
  const Eigen::Index k = seq.empty() ? 0 : seq.values.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < k; ++i) {
    os << ',' << prefix << '_' << i;
  }
  os << '\n';
  for (int t = seq.first_index; t <= seq.last_index(); ++t) {
    write_row(os, t, seq.at(t));
    os << '\n';
  }
}

void write_process(std::ostream& os, const Process& proc) {
  const Eigen::Index n = proc.states.front().size();
  const Eigen::Index d = proc.controls.empty() ? 0 : proc.controls.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) {
    os << ",x_" << i;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    os << ",u_" << i;
  }
  os << '\n';
  for (int t = 0; t <= proc.horizon(); ++t) {
    write_row(os, t, proc.state(t));
    for (Eigen::Index i = 0; i < d; ++i) {
      os << ',';
      if (t < proc.horizon()) {
        os << format_double(proc.controls[static_cast<std::size_t>(t)][i]);
      }
    }
    os << '\n';
  }
}

Process read_process(std::istream& is, TailConvention tail) {
  std::string line;
  if (!std::getline(is, line)) {
    throw Error("empty process CSV");
  }
  const std::vector<std::string> header = split(line);
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].rfind("x_", 0) == 0) {
      ++n;
    } else if (header[i].rfind("u_", 0) == 0) {
      ++d;
    } else {
      throw Error("unexpected CSV column '" + header[i] + "'");
    }
  }
  if (header.empty() || header[0] != "t" || n == 0) {
    throw Error("process CSV needs columns t, x_*, u_*");
  }
  Process proc;
  proc.tail = tail;
  std::vector<std::string> pending;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> cells = split(line);
    if (static_cast<Eigen::Index>(cells.size()) != 1 + n + d) {
      throw DimensionError("process CSV row has the wrong number of cells");
    }
    if (parse_double(cells[0]) != static_cast<double>(proc.states.size())) {
      throw Error("process CSV rows must be consecutive from t = 0");
    }
    if (!pending.empty()) {
      throw Error("only the last process CSV row may omit controls");
    }
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x[i] = parse_double(cells[static_cast<std::size_t>(1 + i)]);
    }
    proc.states.push_back(std::move(x));
    if (d > 0 && cells[static_cast<std::size_t>(1 + n)].empty()) {
      pending = cells;
      continue;
    }
    Vec u(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      u[i] = parse_double(cells[static_cast<std::size_t>(1 + n + i)]);
    }
    proc.controls.push_back(std::move(u));
  }
  if (proc.controls.size() + 1 != proc.states.size()) {
    throw DimensionError("process CSV needs T+1 states and T controls");
  }
  proc.validate(static_cast<int>(n), static_cast<int>(d));
  return proc;
}

void write_costates(std::ostream& os, const CostateSeq& costates) {
  const Eigen::Index n = costates.p.empty() ? 0 : costates.p.values.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) {
    os << ",p_" << i;
  }
  os << ",norm\n";
  for (int t = costates.p.first_index; t <= costates.p.last_index(); ++t) {
    const Vec& p = costates.p.at(t);
    write_row(os, t, p);
    os << ',' << format_double(p.norm()) << '\n';
  }
}

void write_trace(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "iteration,objective,grad_norm,step\n";
  for (const TraceEntry& e : trace) {
    os << e.iteration << ',' << format_double(e.objective) << ',' << format_double(e.grad_norm) << ','
       << format_double(e.step) << '\n';
  }
}

}  // namespace ihoc::csv
