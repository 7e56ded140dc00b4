#include "salm/app/csv_log.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "salm/errors.hpp"

namespace salm::app {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw NumericalError("cannot format number");
  return std::string(buf.data(), ptr);
}

namespace {

std::string finite(double v, const char* column) {
  if (!std::isfinite(v)) throw NumericalError(std::string("non-finite value in column ") + column);
  return format_number(v);
}

}  // namespace

void write_run_row(std::ostream& out, const RunRecord& r, bool record_timing) {
  std::string row = std::to_string(r.k) + ',' + std::to_string(r.cum_inner_steps) + ',' +
                    std::to_string(r.stopping_index) + ',' + finite(r.mu, "mu_k") + ',' +
                    finite(r.feasibility, "H_k") + ',' + finite(r.optimality_estimate, "r_hat_k") +
                    ',' + finite(r.objective_estimate, "obj_hat") + ',' +
                    finite(r.gradient_norm_estimate, "grad_norm_hat") + ',' +
                    std::to_string(r.batch_size) + ',' + finite(r.step_size, "t_k") + ',' +
                    (record_timing ? finite(r.wall_ms, "wall_ms") : std::string("0"));
  out << row << '\n';
}

void write_steps_rows(std::ostream& out, const RunRecord& r) {
  for (std::size_t j = 0; j < r.steps.size(); ++j) {
    const StepRecord& s = r.steps[j];
    out << r.k << ',' << (j + 1) << ',' << finite(s.objective_estimate, "objective_estimate") << ','
        << finite(s.gradient_norm_estimate, "gradient_norm_estimate") << ','
        << finite(s.step_norm, "step_norm") << ',' << s.halvings << '\n';
  }
}

namespace {

template <class T>
T parse_field(const std::string& s, int line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error("run CSV line " + std::to_string(line) + ": bad field '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<CsvRow> read_run_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunCsvHeader) throw Error("run CSV header mismatch");
  std::vector<CsvRow> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 11) throw Error("run CSV line " + std::to_string(n) + ": expected 11 fields");
    CsvRow r;
    r.k = parse_field<int>(f[0], n);
    r.cum_inner_steps = parse_field<long long>(f[1], n);
    r.stopping_index = parse_field<long long>(f[2], n);
    r.mu = parse_field<double>(f[3], n);
    r.feasibility = parse_field<double>(f[4], n);
    r.optimality = parse_field<double>(f[5], n);
    r.objective = parse_field<double>(f[6], n);
    r.gradient_norm = parse_field<double>(f[7], n);
    r.batch_size = parse_field<long long>(f[8], n);
    r.step_size = parse_field<double>(f[9], n);
    r.wall_ms = parse_field<double>(f[10], n);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace salm::app
