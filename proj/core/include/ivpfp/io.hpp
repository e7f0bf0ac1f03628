#pragma once

#include <map>
#include <string>
#include <vector>

#include "ivpfp/distribution.hpp"
#include "ivpfp/fluid.hpp"
#include "ivpfp/kinetic.hpp"
#include "ivpfp/metrics.hpp"

namespace ivpfp::io {

// All floating point output is printed with %.17g so round-tripping and
// byte-identical reruns hold.
std::string format_double(double v);

// Phase-space snapshot: line 1 "nx,nv,length,vmax", line 2 the four values,
// then n_x lines of n_v comma-separated f values (x outer, v inner).
void write_distribution(const std::string& path, const Distribution& f);
Distribution read_distribution(const std::string& path);

// Spatial field file: line 1 "nx,length", line 2 the two values, then one
// value per line.
void write_field(const std::string& path, const Field& f, const SpatialGrid& g);
std::pair<Field, SpatialGrid> read_field(const std::string& path);

// t,mass,momentum,second_moment,energy,cum_dissipation,leak
void write_diagnostics(const std::string& path, const DiagnosticsRecord& diag);

// x,rho,u,phi,rho_e,u_e
void write_fluid_snapshot(const std::string& path, const FluidState& s,
                          const ElectronField& e);

// t,mass,energy,min_rho
void write_fluid_log(const std::string& path, const std::vector<FluidLogSample>& log);

// t,kinetic_term,pressure_term,field_term,electron_term,total
void write_reports(const std::string& path, const std::vector<ModulatedEnergyReport>& reports);

// Flat "key = value" file; '#' starts a comment. Values keep their raw string
// form; list-valued keys are comma-separated.
std::map<std::string, std::string> read_config(const std::string& path);

double get_double(const std::map<std::string, std::string>& kv, const std::string& key,
                  double fallback);
int get_int(const std::map<std::string, std::string>& kv, const std::string& key,
            int fallback);
bool get_bool(const std::map<std::string, std::string>& kv, const std::string& key,
              bool fallback);
std::vector<double> get_list(const std::map<std::string, std::string>& kv,
                             const std::string& key, const std::vector<double>& fallback);

}  // namespace ivpfp::io
