#include "fsp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fsp/rng.hpp"

namespace fsp {

std::map<std::string, AggregatedScore> aggregate_raters(const RaterTable& table) {
    if (table.empty()) {
        throw DataError("aggregate_raters: empty rater table");
    }
    std::map<std::string, std::pair<double, std::size_t>> sums;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& r : table) {
        if (r.score < 0 || r.score > 2) {
            throw DataError("aggregate_raters: score " + std::to_string(r.score) +
                            " for video " + r.video_id + " not in {0,1,2}");
        }
        if (!seen.insert({r.video_id, r.rater_id}).second) {
            throw DataError("aggregate_raters: duplicate (video, rater) pair (" +
                            r.video_id + ", " + r.rater_id + ")");
        }
        auto& [sum, count] = sums[r.video_id];
        sum += r.score;
        ++count;
    }
    std::map<std::string, AggregatedScore> out;
    for (const auto& [id, sc] : sums) {
        const double mean = sc.first / double(sc.second);
        StabilityLabel ternary;
        if (mean > 1.2) {
            ternary = StabilityLabel::Stable;
        } else if (mean < 0.8) {
            ternary = StabilityLabel::Unstable;
        } else {
            ternary = StabilityLabel::Uncertain;
        }
        out[id] = {mean, ternary};
    }
    return out;
}

BinaryLabel binarize(double score) {
    if (!(score >= 0.0 && score <= 2.0)) {
        throw DataError("binarize: score " + std::to_string(score) +
                        " outside [0,2]");
    }
    return score > 1.2 ? BinaryLabel::Stable : BinaryLabel::Unstable;
}

namespace {

void check_same_keys(const std::map<std::string, BinaryLabel>& predictions,
                     const std::map<std::string, BinaryLabel>& truth,
                     const std::string& who) {
    std::vector<std::string> missing, extra;
    for (const auto& [id, _] : truth) {
        if (!predictions.contains(id)) missing.push_back(id);
    }
    for (const auto& [id, _] : predictions) {
        if (!truth.contains(id)) extra.push_back(id);
    }
    if (missing.empty() && extra.empty()) return;
    std::ostringstream os;
    os << who << ": prediction/truth id mismatch";
    if (!missing.empty()) {
        os << "; missing:";
        for (const auto& id : missing) os << " " << id;
    }
    if (!extra.empty()) {
        os << "; extra:";
        for (const auto& id : extra) os << " " << id;
    }
    throw DataError(os.str());
}

} // namespace

EvaluationReport confusion(const std::map<std::string, BinaryLabel>& predictions,
                           const std::map<std::string, BinaryLabel>& truth) {
    check_same_keys(predictions, truth, "confusion");
    EvaluationReport rep;
    for (const auto& [id, actual] : truth) {
        const BinaryLabel predicted = predictions.at(id);
        if (actual == BinaryLabel::Unstable) {
            predicted == BinaryLabel::Unstable ? ++rep.tp : ++rep.fn;
        } else {
            predicted == BinaryLabel::Unstable ? ++rep.fp : ++rep.tn;
        }
    }
    rep.n = truth.size();
    rep.accuracy = rep.n > 0 ? double(rep.tp + rep.tn) / double(rep.n) : 0.0;
    if (rep.fp + rep.tn > 0) rep.fp_rate = double(rep.fp) / double(rep.fp + rep.tn);
    if (rep.fn + rep.tp > 0) rep.fn_rate = double(rep.fn) / double(rep.fn + rep.tp);
    return rep;
}

BaselineStats random_baseline(const std::map<std::string, BinaryLabel>& truth,
                              std::size_t trials, std::uint64_t seed) {
    if (truth.empty()) throw DataError("random_baseline: empty truth set");
    if (trials < 1) throw DataError("random_baseline: trials must be >= 1");

    std::vector<BinaryLabel> actual;
    actual.reserve(truth.size());
    for (const auto& [_, label] : truth) actual.push_back(label);

    std::vector<double> accuracy(trials);
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static)
    for (std::int64_t t = 0; t < count; ++t) {
        auto eng = rng::make_engine(seed, std::uint64_t(t));
        std::size_t hits = 0;
        for (const BinaryLabel a : actual) {
            const BinaryLabel guess =
                rng::coin(eng) ? BinaryLabel::Stable : BinaryLabel::Unstable;
            if (guess == a) ++hits;
        }
        accuracy[t] = double(hits) / double(actual.size());
    }

    double mean = 0.0;
    for (double a : accuracy) mean += a;
    mean /= double(trials);
    double var = 0.0;
    if (trials > 1) {
        for (double a : accuracy) var += (a - mean) * (a - mean);
        var /= double(trials - 1);
    }
    return {mean, std::sqrt(var)};
}

MethodComparison compare_methods(
    const std::map<std::string, double>& truth_scores,
    const std::map<std::string, std::map<std::string, double>>& methods) {
    std::map<std::string, BinaryLabel> truth;
    for (const auto& [id, score] : truth_scores) truth[id] = binarize(score);

    MethodComparison cmp;
    for (const auto& [id, score] : truth_scores) {
        cmp.long_rows.push_back({id, "human", score});
    }
    for (const auto& [name, predictions] : methods) {
        std::map<std::string, BinaryLabel> binary;
        for (const auto& [id, value] : predictions) binary[id] = binarize(value);
        cmp.reports[name] = confusion(binary, truth);
        for (const auto& [id, value] : predictions) {
            cmp.long_rows.push_back({id, name, value});
        }
    }
    return cmp;
}

// --------------------------- CSV interfaces -------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace and CR
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? ""
                                                : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string read_header(std::istream& in, const char* expected,
                        const char* what) {
    std::string header;
    if (!std::getline(in, header)) {
        throw FormatError(std::string(what) + ": empty file (header required)");
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != expected) {
        throw FormatError(std::string(what) + ": expected header \"" + expected +
                          "\", got \"" + header + "\"");
    }
    return header;
}

} // namespace

RaterTable read_rater_csv(std::istream& in) {
    read_header(in, "video_id,rater_id,score", "rater csv");
    RaterTable table;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw FormatError("rater csv line " + std::to_string(lineno) +
                              ": expected 3 fields, got " +
                              std::to_string(fields.size()));
        }
        try {
            table.push_back({fields[0], fields[1], std::stoi(fields[2])});
        } catch (const std::exception&) {
            throw FormatError("rater csv line " + std::to_string(lineno) +
                              ": bad score \"" + fields[2] + "\"");
        }
    }
    return table;
}

std::map<std::string, double> read_prediction_csv(std::istream& in) {
    read_header(in, "video_id,prediction", "prediction csv");
    std::map<std::string, double> out;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw FormatError("prediction csv line " + std::to_string(lineno) +
                              ": expected 2 fields, got " +
                              std::to_string(fields.size()));
        }
        double value = 0.0;
        try {
            value = std::stod(fields[1]);
        } catch (const std::exception&) {
            throw FormatError("prediction csv line " + std::to_string(lineno) +
                              ": bad prediction \"" + fields[1] + "\"");
        }
        if (!out.emplace(fields[0], value).second) {
            throw DataError("prediction csv line " + std::to_string(lineno) +
                            ": duplicate video id " + fields[0]);
        }
    }
    return out;
}

void write_report_csv(const std::map<std::string, EvaluationReport>& reports,
                      std::ostream& out) {
    out << "method,n,tp,fp,tn,fn,accuracy,fp_rate,fn_rate\n";
    for (const auto& [name, r] : reports) {
        out << name << ',' << r.n << ',' << r.tp << ',' << r.fp << ',' << r.tn
            << ',' << r.fn << ',';
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.6g", r.accuracy);
        out << buf << ',';
        if (r.fp_rate) {
            std::snprintf(buf, sizeof buf, "%.6g", *r.fp_rate);
            out << buf;
        }
        out << ',';
        if (r.fn_rate) {
            std::snprintf(buf, sizeof buf, "%.6g", *r.fn_rate);
            out << buf;
        }
        out << '\n';
    }
}

void write_comparison_csv(const MethodComparison& comparison,
                          std::ostream& out) {
    out << "video_id,method,prediction_value\n";
    char buf[64];
    for (const auto& row : comparison.long_rows) {
        std::snprintf(buf, sizeof buf, "%.6g", row.prediction_value);
        out << row.video_id << ',' << row.method << ',' << buf << '\n';
    }
}

} // namespace fsp
