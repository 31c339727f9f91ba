#include "shtc/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shtc {

namespace {

// Neumaier's compensated sum in a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("series csv: bad number '" + s + "'");
  return v;
}

}  // namespace

double total_energy(const SystemModel& sys, const StaggeredMesh& mesh, const CollocatedState& state) {
  CompensatedSum s;
  for (int c = 0; c < mesh.num_cells(); ++c) s.add(sys.energy(state.at(sys, c)));
  return mesh.cell_volume() * s.value();
}

double total_energy(const SystemModel& sys, const StaggeredMesh& mesh, const StaggeredFields& state) {
  CompensatedSum cells;
  for (int c = 0; c < mesh.num_cells(); ++c) cells.add(sys.block_energy(Location::Cell, state.cell.at(c)));
  CompensatedSum vertices;
  for (int p = 0; p < mesh.num_vertices(); ++p)
    vertices.add(sys.block_energy(Location::Vertex, state.vertex.at(p)));
  CompensatedSum total;
  total.add(mesh.cell_volume() * cells.value());
  total.add(mesh.dual_volume() * vertices.value());
  return total.value();
}

const DiagnosticRecord& DiagnosticSeries::record(DiagnosticRecord r) {
  if (records_.empty()) {
    e0_ = r.total_energy;
    r.rel_energy_error = 0.0;
  } else {
    if (!(r.time > records_.back().time)) throw std::invalid_argument("diagnostic records must increase in time");
    r.rel_energy_error = e0_ != 0.0 ? r.total_energy / e0_ - 1.0 : r.total_energy - e0_;
  }
  records_.push_back(r);
  return records_.back();
}

double DiagnosticSeries::max_abs_rel_energy_error() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, std::abs(r.rel_energy_error));
  return m;
}

void write_series_csv(std::ostream& out, const std::vector<DiagnosticRecord>& records) {
  out << kSeriesHeader << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  auto opt_int = [](const std::optional<long>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : records) {
    out << format_real(r.time) << ',' << format_real(r.total_energy) << ',' << format_real(r.rel_energy_error) << ','
        << opt(r.div_B_max) << ',' << opt(r.div_D_max) << ',' << opt(r.curl_v_max) << ',' << opt_int(r.picard_iters)
        << ',' << opt_int(r.krylov_iters) << '\n';
  }
}

void write_series_csv(const std::string& path, const std::vector<DiagnosticRecord>& records) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_series_csv(f, records);
  if (!f) throw std::runtime_error("error while writing " + path);
}

std::vector<DiagnosticRecord> read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("series csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSeriesHeader) throw std::invalid_argument("series csv: unexpected header '" + line + "'");
  std::vector<DiagnosticRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw std::invalid_argument("series csv: expected 8 fields in '" + line + "'");
    DiagnosticRecord r;
    r.time = parse_real(f[0]);
    r.total_energy = parse_real(f[1]);
    r.rel_energy_error = parse_real(f[2]);
    auto opt = [](const std::string& s) { return s.empty() ? std::optional<double>() : parse_real(s); };
    auto opt_int = [](const std::string& s) { return s.empty() ? std::optional<long>() : std::stol(s); };
    r.div_B_max = opt(f[3]);
    r.div_D_max = opt(f[4]);
    r.curl_v_max = opt(f[5]);
    r.picard_iters = opt_int(f[6]);
    r.krylov_iters = opt_int(f[7]);
    out.push_back(r);
  }
  return out;
}

std::vector<DiagnosticRecord> read_series_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_series_csv(f);
}

}  // namespace shtc
