#pragma once

#include "surfspline/analysis.hpp"
#include "surfspline/mollifier.hpp"

#include <iosfwd>
#include <vector>

namespace surfspline {

// level,target_h,h,q,rho,N,seed,p,error,rcond,nbc_residual,interp_residual,status
void write_study_csv(std::ostream& out, const StudyReport& report);

/// key: value lines; rates appear as theory_rate_p_<p> and measured_rate_p_<p>.
void write_study_summary(std::ostream& out, const StudyReport& report);

// factor,N,h,q,rho,cond,max_mu,l1_norm,status
void write_instability_csv(std::ostream& out, const InstabilityReport& report);

// alpha,order,value,target,tolerance,pass
void write_moment_csv(std::ostream& out, const std::vector<MomentRow>& rows);

}  // namespace surfspline
