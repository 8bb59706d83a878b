#include "surfspline/report.hpp"

#include "surfspline/text.hpp"

#include <ostream>

namespace surfspline {

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "level,target_h,h,q,rho,N,seed,p,error,rcond,nbc_residual,interp_residual,status\n";
  const auto& ps = report.config.p_values;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const StudyLevel& l = report.levels[i];
    for (std::size_t j = 0; j < ps.size(); ++j) {
      out << i << ',' << format_exact(l.target_h) << ',' << format_exact(l.h) << ',' << format_exact(l.q) << ','
          << format_exact(l.rho) << ',' << l.n << ',' << l.seed << ',' << p_label(ps[j]) << ','
          << format_exact(l.errors[j]) << ',' << format_exact(l.rcond) << ',' << format_exact(l.nbc_residual)
          << ',' << format_exact(l.interpolation_residual) << ',' << l.status << '\n';
    }
  }
}

void write_study_summary(std::ostream& out, const StudyReport& report) {
  const StudyConfig& c = report.config;
  out << "function: " << c.function << '\n'
      << "d: " << c.d << '\n'
      << "k: " << c.k << '\n'
      << "seed: " << c.seed << '\n'
      << "levels_ok: " << report.successful_levels() << " of " << report.levels.size() << '\n'
      << "exact: " << (report.exact ? "true" : "false") << '\n';
  for (std::size_t j = 0; j < c.p_values.size(); ++j) {
    const std::string key = "p_" + p_label(c.p_values[j]);
    out << "theory_rate_" << key << ": " << format_g(report.theory[j], 6) << '\n';
    if (report.rates[j]) {
      out << "measured_rate_" << key << ": " << format_g(report.rates[j]->slope, 6) << '\n'
          << "r2_" << key << ": " << format_g(report.rates[j]->r2, 6) << '\n';
    } else {
      out << "measured_rate_" << key << ": " << (report.exact ? "exact" : "unavailable") << '\n';
    }
  }
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
}

void write_instability_csv(std::ostream& out, const InstabilityReport& report) {
  out << "factor,N,h,q,rho,cond,max_mu,l1_norm,status\n";
  for (const InstabilityRow& r : report.rows) {
    out << format_exact(r.factor) << ',' << r.n << ',' << format_exact(r.h) << ',' << format_exact(r.q) << ','
        << format_exact(r.rho) << ',' << format_exact(r.condition) << ',' << format_exact(r.max_mu) << ','
        << format_exact(r.l1_norm) << ',' << r.status << '\n';
  }
}

void write_moment_csv(std::ostream& out, const std::vector<MomentRow>& rows) {
  out << "alpha,order,value,target,tolerance,pass\n";
  for (const MomentRow& r : rows) {
    std::string alpha;
    for (int i = 0; i < r.alpha.dim(); ++i) alpha += (i ? " " : "") + std::to_string(r.alpha[i]);
    out << alpha << ',' << r.alpha.order() << ',' << format_exact(r.value) << ',' << format_exact(r.target)
        << ',' << format_exact(r.tolerance) << ',' << (r.pass ? "pass" : "fail") << '\n';
  }
}

}  // namespace surfspline
