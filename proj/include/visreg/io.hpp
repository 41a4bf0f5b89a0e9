#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "visreg/diagnostics.hpp"
#include "visreg/eos.hpp"
#include "visreg/errors.hpp"
#include "visreg/grid.hpp"

namespace visreg {

/// Fixed 17-significant-digit decimal.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header x[,y],rho,ux[,uy],e,p,s,min_s_to_date; one row per cell.
/// `min_s_to_date` is the per-cell running minimum of s (may be empty: s is used).
template <int Dim>
void write_snapshot_csv(const std::filesystem::path& path, const ConservedField<Dim>& U, const EosModel& eos,
                        const std::vector<double>& min_s_to_date) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << (Dim == 2 ? "x,y,rho,ux,uy,e,p,s,min_s_to_date\n" : "x,rho,ux,e,p,s,min_s_to_date\n");
  for (int c = 0; c < U.cells(); ++c) {
    const auto x = U.grid.center_of(c);
    const auto u = U.velocity(c);
    const double e = U.internal_energy(c);
    const double s = eos.specific_entropy(U.rho[c], e);
    for (int k = 0; k < Dim; ++k) out << fmt17(x[k]) << ',';
    out << fmt17(U.rho[c]) << ',';
    for (int k = 0; k < Dim; ++k) out << fmt17(u[k]) << ',';
    out << fmt17(e) << ',' << fmt17(eos.pressure(U.rho[c], e)) << ',' << fmt17(s) << ','
        << fmt17(min_s_to_date.empty() ? s : min_s_to_date[c]) << '\n';
  }
}

struct ManifestEntry {
  long step = 0;
  double t = 0.0;
  std::string path;
};

inline void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "step,t,path\n";
  for (const auto& e : entries) out << e.step << ',' << fmt17(e.t) << ',' << e.path << '\n';
}

/// name,pass,worst,where,tol
inline void write_certificates(const std::filesystem::path& path, const std::vector<Certificate>& certs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "name,pass,worst,where,tol\n";
  for (const auto& c : certs)
    out << c.name << ',' << (c.pass ? "pass" : "fail") << ',' << fmt17(c.worst) << ',' << c.where() << ','
        << fmt17(c.tol) << '\n';
}

}  // namespace visreg
