#ifndef INFLOW_IO_HPP
#define INFLOW_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "inflow/background.hpp"
#include "inflow/boundary_layer.hpp"
#include "inflow/diagnostics.hpp"
#include "inflow/rarefaction.hpp"

namespace inflow {

// 17 significant digits: enough to round-trip doubles, so replayed runs
// compare byte-identical.
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no CRLF surprises
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace detail

inline void write_profile_csv(const std::filesystem::path& path,
                              const BoundaryLayerProfile& prof) {
    auto out = detail::open_out(path);
    out << "xi,V,U,U_xi\n";
    for (std::size_t j = 0; j < prof.size(); ++j)
        out << g17(prof.xi[j]) << ',' << g17(prof.V[j]) << ',' << g17(prof.U[j]) << ','
            << g17(prof.U_xi[j]) << '\n';
}

inline void write_rarefaction_profile_csv(const std::filesystem::path& path,
                                          const RarefactionEvaluator& ev, double t,
                                          const Grid& grid) {
    auto out = detail::open_out(path);
    out << "xi,V,U,V_xi,U_xi\n";
    for (std::size_t j = 0; j < grid.nodes(); ++j) {
        const ProfilePoint p = ev.eval_full(t, grid.xi(j));
        out << g17(grid.xi(j)) << ',' << g17(p.V) << ',' << g17(p.U) << ',' << g17(p.V_xi)
            << ',' << g17(p.U_xi) << '\n';
    }
}

inline void write_fields_csv(const std::filesystem::path& path, const Grid& grid,
                             const SolverState& st, const BackgroundFields& bf) {
    auto out = detail::open_out(path);
    out << "xi,v,u,V,U,phi,psi\n";
    for (std::size_t j = 0; j < grid.nodes(); ++j)
        out << g17(grid.xi(j)) << ',' << g17(st.v[j]) << ',' << g17(st.u[j]) << ','
            << g17(bf.V[j]) << ',' << g17(bf.U[j]) << ',' << g17(st.v[j] - bf.V[j]) << ','
            << g17(st.u[j] - bf.U[j]) << '\n';
}

inline void write_diagnostics_csv(const std::filesystem::path& path,
                                  const std::vector<DiagnosticsFrame>& frames) {
    auto out = detail::open_out(path);
    out << "t,sup_diff,l2_phi_psi,energy_phi,vtilde_grad,dissipation_cum,boundary_trace,"
           "compat_residual,v_min,v_max,kanel_lo,kanel_hi,cs_margin\n";
    for (const auto& f : frames)
        out << g17(f.t) << ',' << g17(f.sup_diff) << ',' << g17(f.l2_phi_psi) << ','
            << g17(f.energy_phi) << ',' << g17(f.vtilde_grad) << ',' << g17(f.dissipation_cum)
            << ',' << g17(f.boundary_trace) << ',' << g17(f.compat_residual) << ','
            << g17(f.v_min) << ',' << g17(f.v_max) << ',' << g17(f.kanel_lo) << ','
            << g17(f.kanel_hi) << ',' << g17(f.cs_margin) << '\n';
}

// Ordered key=value summary; values are preformatted strings.
class Summary {
  public:
    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, g17(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }

    void write(const std::filesystem::path& path) const {
        auto out = detail::open_out(path);
        for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace inflow

#endif
