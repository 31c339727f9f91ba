#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "shtc/grid.hpp"
#include "shtc/htc.hpp"
#include "shtc/simm.hpp"
#include "shtc/systems.hpp"

namespace shtc {

/// sum_l |Omega_l| E(q_l) over the cells of a collocated state.
double total_energy(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state);

/// sum_c |Omega_c| E_cell(q_c) + sum_p |Omega_p| E_vertex(q_p).
double total_energy(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state);

struct DiagnosticRecord {
  double time = 0.0;
  double total_energy = 0.0;
  double rel_energy_error = 0.0;  ///< E / E0 - 1
  std::optional<double> div_B_max;
  std::optional<double> div_D_max;
  std::optional<double> curl_v_max;
  std::optional<long> picard_iters;
  std::optional<long> krylov_iters;

  bool operator==(const DiagnosticRecord&) const = default;
};

/// Time series of diagnostic records with a fixed reference energy.
class DiagnosticSeries {
 public:
  const std::vector<DiagnosticRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  double initial_energy() const { return e0_; }

  /// Appends a record. The first call fixes E0; rel_energy_error is filled in
  /// here. Throws std::invalid_argument unless time strictly increases.
  const DiagnosticRecord& record(DiagnosticRecord r);

  /// Largest |E/E0 - 1| over the series.
  double max_abs_rel_energy_error() const;

 private:
  std::vector<DiagnosticRecord> records_;
  double e0_ = 0.0;
};

inline constexpr const char* kSeriesHeader =
    "time,total_energy,rel_energy_error,div_B_max,div_D_max,curl_v_max,picard_iters,krylov_iters";

/// CSV with the header above; absent quantities are empty fields and reals
/// are printed with 17 significant digits, so a read-back is bit-exact.
void write_series_csv(std::ostream& out, const std::vector<DiagnosticRecord>& records);
void write_series_csv(const std::string& path, const std::vector<DiagnosticRecord>& records);
std::vector<DiagnosticRecord> read_series_csv(std::istream& in);
std::vector<DiagnosticRecord> read_series_csv(const std::string& path);

}  // namespace shtc
