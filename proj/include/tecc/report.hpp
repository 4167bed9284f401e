#pragma once

#include "tecc/crossval.hpp"
#include "tecc/roc.hpp"

#include <string>

namespace tecc {

// `fpr,tpr,threshold`; the +/-inf sentinels are written as inf and -inf.
std::string format_roc_csv(const RocCurve& curve);

// `fpr,mean_tpr,stderr_tpr`
std::string format_average_roc_csv(const AveragedRoc& avg);

// `fold,auc` rows followed by `mean,<v>` and `stderr,<v>`.
std::string format_fold_auc_csv(const FoldSummary& summary);

std::string format_text_report(const EvalReport& report);

// Mean ROC with a +/-1 standard error band on a 640x480 viewBox.
std::string render_roc_svg(const AveragedRoc& avg, const std::string& title);

}  // namespace tecc
