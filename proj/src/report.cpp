#include "tecc/report.hpp"

#include "tecc/fileio.hpp"

#include <algorithm>
#include <cstdio>

namespace tecc {

std::string format_roc_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr,threshold\n";
    for (const RocPoint& p : curve.points) {
        out += format_double(p.fpr) + ',' + format_double(p.tpr) + ',' + format_double(p.threshold) + '\n';
    }
    return out;
}

std::string format_average_roc_csv(const AveragedRoc& avg) {
    std::string out = "fpr,mean_tpr,stderr_tpr\n";
    for (std::size_t i = 0; i < avg.fpr.size(); ++i) {
        out += format_double(avg.fpr[i]) + ',' + format_double(avg.mean_tpr[i]) + ',' +
               format_double(avg.stderr_tpr[i]) + '\n';
    }
    return out;
}

std::string format_fold_auc_csv(const FoldSummary& summary) {
    std::string out = "fold,auc\n";
    for (std::size_t f = 0; f < summary.aucs.size(); ++f) {
        out += std::to_string(f) + ',' + format_double(summary.aucs[f]) + '\n';
    }
    out += "mean," + format_double(summary.mean) + '\n';
    out += "stderr," + format_double(summary.standard_error) + '\n';
    return out;
}

namespace {

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string format_text_report(const EvalReport& r) {
    std::string out;
    out += "recordings: " + std::to_string(r.num_pos + r.num_neg) + " (" + std::to_string(r.num_pos) +
           " positive, " + std::to_string(r.num_neg) + " negative)\n";
    if (r.per_fold) {
        const FoldSummary& f = *r.per_fold;
        for (std::size_t i = 0; i < f.aucs.size(); ++i) out += "fold " + std::to_string(i) + " AUC: " + fixed(f.aucs[i]) + '\n';
        out += "mean fold AUC: " + fixed(f.mean) + " +/- " + fixed(f.standard_error) + " (stderr)\n";
        out += "pooled AUC: " + fixed(r.auc) + '\n';
    } else {
        out += "AUC: " + fixed(r.auc) + '\n';
    }
    out += "sensitivity target: " + fixed(r.sensitivity_target) + '\n';
    out += "operating point: sensitivity " + fixed(r.operating_point.sensitivity) + ", specificity " +
           fixed(r.operating_point.specificity) + ", threshold " + format_double(r.operating_point.threshold) + '\n';
    return out;
}

std::string render_roc_svg(const AveragedRoc& avg, const std::string& title) {
    constexpr double left = 70, top = 40, width = 520, height = 380;
    auto px = [&](double fpr) { return fixed(left + fpr * width, 2); };
    auto py = [&](double tpr) { return fixed(top + (1.0 - std::clamp(tpr, 0.0, 1.0)) * height, 2); };

    std::string escaped;
    for (char c : title) {
        switch (c) {
            case '<': escaped += "&lt;"; break;
            case '>': escaped += "&gt;"; break;
            case '&': escaped += "&amp;"; break;
            default: escaped += c;
        }
    }

    std::string band;
    for (std::size_t i = 0; i < avg.fpr.size(); ++i) {
        band += px(avg.fpr[i]) + ',' + py(avg.mean_tpr[i] + avg.stderr_tpr[i]) + ' ';
    }
    for (std::size_t i = avg.fpr.size(); i-- > 0;) {
        band += px(avg.fpr[i]) + ',' + py(avg.mean_tpr[i] - avg.stderr_tpr[i]) + ' ';
    }
    std::string line;
    for (std::size_t i = 0; i < avg.fpr.size(); ++i) line += px(avg.fpr[i]) + ',' + py(avg.mean_tpr[i]) + ' ';

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" width=\"640\" height=\"480\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + escaped +
           " (AUC " + fixed(avg.area(), 3) + ")</text>\n";
    svg += "<rect x=\"70\" y=\"40\" width=\"520\" height=\"380\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        svg += "<text x=\"" + px(v) + "\" y=\"438\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fixed(v, 1) + "</text>\n";
        svg += "<text x=\"62\" y=\"" + fixed(top + (1.0 - v) * height + 4, 2) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fixed(v, 1) + "</text>\n";
    }
    svg += "<line x1=\"" + px(0) + "\" y1=\"" + py(0) + "\" x2=\"" + px(1) + "\" y2=\"" + py(1) +
           "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    svg += "<polygon points=\"" + band + "\" fill=\"steelblue\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";
    svg += "<polyline points=\"" + line + "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"330\" y=\"466\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
           "False positive rate (1 - specificity)</text>\n";
    svg += "<text x=\"18\" y=\"230\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 230)\">True positive rate (sensitivity)</text>\n";
    svg += "</svg>\n";
    return svg;
}

}  // namespace tecc
