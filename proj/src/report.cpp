#include "fracsum/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracsum/errors.hpp"
#include "fracsum/version.hpp"

namespace fracsum::report {

std::string fmt17g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Verdict overall_verdict(std::span<const TestReport> reports) {
    Verdict overall = Verdict::pass;
    for (const TestReport& r : reports) {
        if (r.verdict == Verdict::fail) return Verdict::fail;
        if (r.verdict == Verdict::inconclusive) overall = Verdict::inconclusive;
    }
    return overall;
}

std::string to_json(std::span<const TestReport> reports) {
    nlohmann::ordered_json doc;
    doc["tool"] = "fracsum";
    doc["version"] = version;
    doc["overall"] = verdict_name(overall_verdict(reports));
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const TestReport& r : reports) {
        nlohmann::ordered_json jr;
        jr["name"] = r.name;
        jr["verdict"] = verdict_name(r.verdict);
        jr["master_seed"] = r.master_seed;
        jr["note"] = r.note;
        jr["config"] = r.config_echo;
        nlohmann::ordered_json lines = nlohmann::ordered_json::array();
        for (const ReportLine& l : r.lines) {
            nlohmann::ordered_json jl;
            jl["label"] = l.label;
            jl["value"] = l.value;
            jl["threshold"] = l.threshold;
            jl["ok"] = l.ok;
            lines.push_back(std::move(jl));
        }
        jr["lines"] = std::move(lines);
        arr.push_back(std::move(jr));
    }
    doc["reports"] = std::move(arr);
    return doc.dump(2) + "\n";
}

std::string to_text(std::span<const TestReport> reports) {
    std::ostringstream out;
    char buf[256];
    for (const TestReport& r : reports) {
        out << "== " << r.name << ": " << verdict_name(r.verdict) << " (seed "
            << r.master_seed << ")\n";
        if (!r.note.empty()) out << "   note: " << r.note << "\n";
        for (const ReportLine& l : r.lines) {
            std::snprintf(buf, sizeof buf, "   %-44s %14.6g %14.6g  %s\n", l.label.c_str(),
                          l.value, l.threshold, l.ok ? "ok" : "FAIL");
            out << buf;
        }
    }
    out << "overall: " << verdict_name(overall_verdict(reports)) << "\n";
    return out.str();
}

std::string var_ratio_csv(std::span<const VarRatioRow> rows) {
    std::ostringstream out;
    out << "n,var_R_exact,normalizer,sigma2,ratio\n";
    for (const VarRatioRow& row : rows) {
        out << row.n << ',' << fmt17g(row.var_R_exact) << ',' << fmt17g(row.normalizer) << ','
            << fmt17g(row.sigma2) << ',' << fmt17g(row.ratio) << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("short write to '" + path + "'");
}

}  // namespace fracsum::report
