#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "salm/outer_auglag.hpp"

namespace salm::app {

inline constexpr const char* kRunCsvHeader =
    "k,cum_inner_steps,R_k,mu_k,H_k,r_hat_k,obj_hat,grad_norm_hat,m_k,t_k,wall_ms";
inline constexpr const char* kStepsCsvHeader =
    "k,j,objective_estimate,gradient_norm_estimate,step_norm,halvings";

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double v);

/// One row per outer iteration. H_k is the feasibility measure after inner
/// loop k and mu_k the penalty used in it. With `record_timing` false the
/// wall_ms column is written as 0 so that reruns are byte-identical.
/// Throws NumericalError on a non-finite value instead of writing it.
void write_run_row(std::ostream& out, const RunRecord& r, bool record_timing);
void write_steps_rows(std::ostream& out, const RunRecord& r);

/// A parsed run CSV.
struct CsvRow {
  int k = 0;
  long long cum_inner_steps = 0;
  long long stopping_index = 0;
  double mu = 0.0;
  double feasibility = 0.0;
  double optimality = 0.0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  long long batch_size = 0;
  double step_size = 0.0;
  double wall_ms = 0.0;
};

/// Throws Error on a header mismatch or a malformed row.
std::vector<CsvRow> read_run_csv(std::istream& in);

}  // namespace salm::app
