#include "ivpfp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ivpfp/errors.hpp"

namespace ivpfp::io {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void write_distribution(const std::string& path, const Distribution& f) {
    auto out = open_out(path);
    out << "nx,nv,length,vmax\n";
    out << f.xgrid.n_x << ',' << f.vgrid.n_v << ',' << format_double(f.xgrid.length)
        << ',' << format_double(f.vgrid.v_max) << '\n';
    for (int i = 0; i < f.xgrid.n_x; ++i) {
        for (int j = 0; j < f.vgrid.n_v; ++j) {
            if (j) out << ',';
            out << format_double(f(i, j));
        }
        out << '\n';
    }
}

Distribution read_distribution(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header labels
    std::getline(in, line);
    auto vals = split_csv(line);
    if (vals.size() != 4) throw SimError("bad distribution header in " + path);
    SpatialGrid xg(std::stoi(vals[0]), std::stod(vals[2]));
    VelocityGrid vg(std::stoi(vals[1]), std::stod(vals[3]));
    Distribution f(xg, vg);
    for (int i = 0; i < xg.n_x; ++i) {
        if (!std::getline(in, line)) throw SimError("truncated distribution file " + path);
        auto row = split_csv(line);
        if (static_cast<int>(row.size()) != vg.n_v)
            throw SimError("bad distribution row in " + path);
        for (int j = 0; j < vg.n_v; ++j) f(i, j) = std::stod(row[j]);
    }
    return f;
}

void write_field(const std::string& path, const Field& f, const SpatialGrid& g) {
    auto out = open_out(path);
    out << "nx,length\n" << g.n_x << ',' << format_double(g.length) << '\n';
    for (double v : f) out << format_double(v) << '\n';
}

std::pair<Field, SpatialGrid> read_field(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    auto vals = split_csv(line);
    if (vals.size() != 2) throw SimError("bad field header in " + path);
    SpatialGrid g(std::stoi(vals[0]), std::stod(vals[1]));
    Field f;
    f.reserve(g.n_x);
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) f.push_back(std::stod(line));
    }
    if (static_cast<int>(f.size()) != g.n_x) throw SimError("bad field length in " + path);
    return {std::move(f), g};
}

void write_diagnostics(const std::string& path, const DiagnosticsRecord& diag) {
    auto out = open_out(path);
    out << "t,mass,momentum,second_moment,energy,cum_dissipation,leak\n";
    for (const auto& s : diag.samples)
        out << format_double(s.time) << ',' << format_double(s.mass) << ','
            << format_double(s.momentum) << ',' << format_double(s.second_moment) << ','
            << format_double(s.energy) << ',' << format_double(s.cum_dissipation) << ','
            << format_double(s.leak) << '\n';
}

void write_fluid_snapshot(const std::string& path, const FluidState& s,
                          const ElectronField& e) {
    auto out = open_out(path);
    out << "x,rho,u,phi,rho_e,u_e\n";
    const SpatialGrid& g = s.macro.grid;
    for (int i = 0; i < g.n_x; ++i) {
        double u = s.macro.rho[i] > 0 ? s.macro.momentum[i] / s.macro.rho[i] : 0.0;
        out << format_double(g.center(i)) << ',' << format_double(s.macro.rho[i]) << ','
            << format_double(u) << ',' << format_double(s.potential.phi[i]) << ','
            << format_double(e.rho_e[i]) << ',' << format_double(e.u_e[i]) << '\n';
    }
}

void write_fluid_log(const std::string& path, const std::vector<FluidLogSample>& log) {
    auto out = open_out(path);
    out << "t,mass,energy,min_rho\n";
    for (const auto& s : log)
        out << format_double(s.time) << ',' << format_double(s.mass) << ','
            << format_double(s.energy) << ',' << format_double(s.min_rho) << '\n';
}

void write_reports(const std::string& path, const std::vector<ModulatedEnergyReport>& reports) {
    auto out = open_out(path);
    out << "t,kinetic_term,pressure_term,field_term,electron_term,total\n";
    for (const auto& r : reports)
        out << format_double(r.time) << ',' << format_double(r.kinetic_term) << ','
            << format_double(r.pressure_term) << ',' << format_double(r.field_term) << ','
            << format_double(r.electron_term) << ',' << format_double(r.total) << '\n';
}

std::map<std::string, std::string> read_config(const std::string& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = val;
    }
    return kv;
}

double get_double(const std::map<std::string, std::string>& kv, const std::string& key,
                  double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
}

int get_int(const std::map<std::string, std::string>& kv, const std::string& key,
            int fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stoi(it->second);
}

bool get_bool(const std::map<std::string, std::string>& kv, const std::string& key,
              bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}

std::vector<double> get_list(const std::map<std::string, std::string>& kv,
                             const std::string& key, const std::vector<double>& fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::vector<double> out;
    for (const auto& tok : split_csv(it->second)) {
        std::string t = trim(tok);
        if (!t.empty()) out.push_back(std::stod(t));
    }
    return out;
}

}  // namespace ivpfp::io
