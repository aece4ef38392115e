#include "afib/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace afib {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& text, const fs::path& path, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(line_no) +
                                                ": not a number: '" + text + "'");
    }
}

std::ifstream open_for_read(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return in;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
    }
}

RawRecording read_signal_csv(const fs::path& path, SignalKind kind, double nominal_rate_hz) {
    auto in = open_for_read(path);
    std::string line;
    std::size_t line_no = 0;
    RawRecording rec;
    rec.kind = kind;
    rec.nominal_rate_hz = nominal_rate_hz;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (line_no == 1) {
            if (lower(t) != "t,v") {
                throw Error(ErrorCode::FormatError,
                            path.string() + ": expected header 't,v', got '" + t + "'");
            }
            continue;
        }
        const auto fields = split_csv_line(t);
        if (fields.size() != 2) {
            throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(line_no) +
                                                    ": expected 2 fields");
        }
        rec.samples.push_back(
            {parse_number(fields[0], path, line_no), parse_number(fields[1], path, line_no)});
    }
    rec.validate();
    return rec;
}

void write_signal_csv(const fs::path& path, const RawRecording& rec) {
    std::string out = "t,v\n";
    for (const auto& s : rec.samples) {
        out += format_double(s.t_s);
        out += ',';
        out += format_double(s.v);
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<double> read_intervals(const fs::path& path) {
    auto in = open_for_read(path);
    std::vector<double> intervals;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        intervals.push_back(parse_number(t, path, line_no));
    }
    if (intervals.empty()) {
        throw Error(ErrorCode::FormatError, path.string() + ": no intervals found");
    }
    return intervals;
}

void write_intervals(const fs::path& path, const std::vector<double>& intervals_ms) {
    std::string out;
    for (double iv : intervals_ms) {
        out += format_double(iv);
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_edge_list(const fs::path& path, const HvGraph& graph) {
    std::string out;
    for (const auto& [a, b] : graph.edges) {
        out += std::to_string(a + 1);
        out += ' ';
        out += std::to_string(b + 1);
        out += '\n';
    }
    write_file_atomic(path, out);
}

int parse_label(const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "1" || t == "afib") return 1;
    if (t == "0" || t == "sinus") return 0;
    throw Error(ErrorCode::FormatError, "unknown label '" + text + "'");
}

const char* label_name(int label) { return label == 1 ? "afib" : "sinus"; }

LabeledSet FeatureTable::to_labeled_set() const {
    if (!has_labels()) {
        throw Error(ErrorCode::FormatError, "feature table has no label column");
    }
    return LabeledSet{rows, labels};
}

FeatureTable read_feature_csv(const fs::path& path) {
    auto in = open_for_read(path);
    std::string line;
    std::size_t line_no = 0;
    FeatureTable table;
    bool file_col = false, label_col = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        auto fields = split_csv_line(t);
        if (line_no == 1) {
            if (!fields.empty() && lower(fields.front()) == "file") {
                file_col = true;
                fields.erase(fields.begin());
            }
            if (!fields.empty() && lower(fields.back()) == "label") {
                label_col = true;
                fields.pop_back();
            }
            if (fields.empty()) {
                throw Error(ErrorCode::FormatError, path.string() + ": no feature columns");
            }
            table.feature_names = fields;
            continue;
        }
        const std::size_t expected =
            table.feature_names.size() + (file_col ? 1 : 0) + (label_col ? 1 : 0);
        if (fields.size() != expected) {
            throw Error(ErrorCode::FormatError, path.string() + ":" + std::to_string(line_no) +
                                                    ": expected " + std::to_string(expected) +
                                                    " fields");
        }
        std::size_t at = 0;
        if (file_col) table.files.push_back(fields[at++]);
        std::vector<double> row;
        row.reserve(table.feature_names.size());
        for (std::size_t j = 0; j < table.feature_names.size(); ++j) {
            row.push_back(parse_number(fields[at++], path, line_no));
        }
        table.rows.push_back(std::move(row));
        if (label_col) table.labels.push_back(parse_label(fields[at]));
    }
    if (table.rows.empty()) {
        throw Error(ErrorCode::FormatError, path.string() + ": no feature rows");
    }
    return table;
}

std::string feature_csv_text(const FeatureTable& table) {
    std::string out;
    if (table.has_files()) out += "file,";
    for (std::size_t j = 0; j < table.feature_names.size(); ++j) {
        if (j) out += ',';
        out += table.feature_names[j];
    }
    if (table.has_labels()) out += ",label";
    out += '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.has_files()) {
            out += table.files[i];
            out += ',';
        }
        for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
            if (j) out += ',';
            out += format_double(table.rows[i][j]);
        }
        if (table.has_labels()) {
            out += ',';
            out += label_name(table.labels[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<std::pair<std::string, int>> read_manifest(const fs::path& path) {
    auto in = open_for_read(path);
    std::vector<std::pair<std::string, int>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto fields = split_csv_line(t);
        if (line_no == 1) {
            if (fields.size() != 2 || lower(fields[0]) != "file" || lower(fields[1]) != "label") {
                throw Error(ErrorCode::FormatError,
                            path.string() + ": expected header 'file,label'");
            }
            continue;
        }
        if (fields.size() != 2) {
            throw Error(ErrorCode::FormatError,
                        path.string() + ":" + std::to_string(line_no) + ": expected 2 fields");
        }
        entries.emplace_back(fields[0], parse_label(fields[1]));
    }
    return entries;
}

std::string manifest_csv_text(const std::vector<std::pair<std::string, int>>& entries) {
    std::string out = "file,label\n";
    for (const auto& [file, label] : entries) {
        out += file;
        out += ',';
        out += label_name(label);
        out += '\n';
    }
    return out;
}

void save_model_json(const fs::path& path, const LogisticModel& model) {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["means"] = model.feature_means;
    j["stds"] = model.feature_stds;
    j["threshold"] = model.threshold;
    j["l2"] = model.l2;
    write_file_atomic(path, j.dump(2) + "\n");
}

LogisticModel load_model_json(const fs::path& path) {
    auto in = open_for_read(path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }
    LogisticModel model;
    try {
        if (j.at("format_version").get<int>() != 1) {
            throw Error(ErrorCode::FormatError, path.string() + ": unsupported format_version");
        }
        model.weights = j.at("weights").get<std::vector<double>>();
        model.intercept = j.at("intercept").get<double>();
        model.feature_means = j.at("means").get<std::vector<double>>();
        model.feature_stds = j.at("stds").get<std::vector<double>>();
        model.threshold = j.at("threshold").get<double>();
        model.l2 = j.at("l2").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::FormatError, path.string() + ": " + e.what());
    }
    if (model.weights.size() != model.feature_means.size() ||
        model.weights.size() != model.feature_stds.size()) {
        throw Error(ErrorCode::FormatError, path.string() + ": inconsistent vector lengths");
    }
    for (double sd : model.feature_stds) {
        if (!(sd > 0.0)) {
            throw Error(ErrorCode::FormatError, path.string() + ": stds must be positive");
        }
    }
    if (!(model.threshold > 0.0) || !(model.threshold < 1.0)) {
        throw Error(ErrorCode::FormatError, path.string() + ": threshold must be in (0,1)");
    }
    return model;
}

std::string metrics_csv_text(const CvResult& cv) {
    std::string out = "fold,sensitivity,specificity,accuracy,auc\n";
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        out += std::to_string(f + 1);
        out += ',';
        out += format_double(cv.folds[f].metrics.sensitivity);
        out += ',';
        out += format_double(cv.folds[f].metrics.specificity);
        out += ',';
        out += format_double(cv.folds[f].metrics.accuracy);
        out += ',';
        out += format_double(cv.folds[f].auc);
        out += '\n';
    }
    out += "pooled,";
    out += format_double(cv.pooled_metrics.sensitivity);
    out += ',';
    out += format_double(cv.pooled_metrics.specificity);
    out += ',';
    out += format_double(cv.pooled_metrics.accuracy);
    out += ',';
    out += format_double(cv.pooled_auc);
    out += '\n';
    return out;
}

std::string roc_csv_text(const RocCurve& curve) {
    std::string out = "threshold,fpr,tpr\n";
    for (const auto& p : curve.points) {
        out += format_double(p.threshold);
        out += ',';
        out += format_double(p.fpr);
        out += ',';
        out += format_double(p.tpr);
        out += '\n';
    }
    return out;
}

}  // namespace afib
