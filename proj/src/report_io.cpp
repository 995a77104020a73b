#include "qmcqoi/report_io.hpp"

#include <fstream>
#include <iostream>
#include <json.hpp>

namespace qmcqoi {

namespace {

// JSON has no inf/nan literals; encode as strings.
nlohmann::ordered_json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::ordered_json num_vec(const MultiArray& a) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(num(a[i]));
    return out;
}

} // namespace

void write_report(std::ostream& out, const RunReport& report, ReportFormat format) {
    const Shape& d_s = report.s_bounds.shape();
    if (format == ReportFormat::Csv) {
        out << "index,s_hat,s_lo,s_hi,converged\n";
        for (std::size_t l = 0; l < report.s_bounds.size(); ++l) {
            std::string idx = index_str(d_s, l);
            for (char& ch : idx)
                if (ch == ',') ch = '.';
            idx = idx.substr(1, idx.size() - 2);
            out << idx << ',' << report.s_hat[l] << ',' << report.s_bounds.lo()[l]
                << ',' << report.s_bounds.hi()[l] << ','
                << (report.converged.get(l) ? 1 : 0) << '\n';
        }
        return;
    }
    nlohmann::ordered_json j;
    j["shape_s"] = d_s;
    j["shape_mu"] = report.mu_bounds.shape();
    j["s_hat"] = num_vec(report.s_hat);
    j["s_lo"] = num_vec(report.s_bounds.lo());
    j["s_hi"] = num_vec(report.s_bounds.hi());
    j["mu_lo"] = num_vec(report.mu_bounds.lo());
    j["mu_hi"] = num_vec(report.mu_bounds.hi());
    j["converged"] = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < report.converged.size(); ++l)
        j["converged"].push_back(report.converged.get(l));
    j["n_total"] = report.n_total;
    j["sequences_used"] = report.sequences_used;
    j["eval_counts"] = report.eval_counts;
    j["iterations"] = report.iterations;
    j["budget_exhausted"] = report.budget_exhausted;
    j["wall_time"] = report.wall_time;
    out << j.dump(2) << '\n';
}

void emit_report(const std::string& path, const RunReport& report,
                 ReportFormat format) {
    if (path.empty() || path == "-") {
        write_report(std::cout, report, format);
        if (!std::cout) throw std::runtime_error("write to stdout failed");
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output path: " + path);
    write_report(out, report, format);
    if (!out) throw std::runtime_error("write failed: " + path);
}

int report_exit_code(const RunReport& report) {
    return report.converged.all() ? 0 : 2;
}

} // namespace qmcqoi
