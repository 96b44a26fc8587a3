#include "slrbench/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace slr {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("config: " + key + " expects an integer, got '" + value + "'");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("config: " + key + " expects an unsigned integer, got '" + value +
                             "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("config: " + key + " expects a number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParameterError("config: " + key + " expects true/false, got '" + value + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
    if (out.empty()) throw ParameterError("config: " + key + " expects a comma list");
    return out;
}

std::string join(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config: line " + std::to_string(line_no) +
                                 " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "data.root") cfg.data_root = value;
        else if (key == "data.name") cfg.dataset_name = value;
        else if (key == "out.dir") cfg.out_dir = value;
        else if (key == "run.checked") cfg.checked = parse_bool(key, value);
        else if (key == "model.kind") cfg.model.kind = model_kind_from_string(value);
        else if (key == "model.num_classes") cfg.model.num_classes = parse_int(key, value);
        else if (key == "model.conv_filters") cfg.model.conv_filters = parse_int(key, value);
        else if (key == "model.lstm_units") cfg.model.lstm_units = parse_int(key, value);
        else if (key == "model.layers") cfg.model.layers = parse_int(key, value);
        else if (key == "model.heads") cfg.model.heads = parse_int(key, value);
        else if (key == "model.model_dim") cfg.model.model_dim = parse_int(key, value);
        else if (key == "model.ffn_dim") cfg.model.ffn_dim = parse_int(key, value);
        else if (key == "model.dropout") cfg.model.dropout = parse_double(key, value);
        else if (key == "model.positional_encoding")
            cfg.model.positional_encoding = parse_bool(key, value);
        else if (key == "train.epochs") cfg.train.epochs = parse_int(key, value);
        else if (key == "train.batch_size") cfg.train.batch_size = parse_int(key, value);
        else if (key == "train.lr_base") cfg.train.lr_base = parse_double(key, value);
        else if (key == "train.lr_max") cfg.train.lr_max = parse_double(key, value);
        else if (key == "train.cycle_epochs") cfg.train.cycle_epochs = parse_int(key, value);
        else if (key == "train.weight_decay") cfg.train.weight_decay = parse_double(key, value);
        else if (key == "train.clip_norm") cfg.train.clip_norm = parse_double(key, value);
        else if (key == "train.label_smoothing")
            cfg.train.label_smoothing = parse_double(key, value);
        else if (key == "train.patience") cfg.train.patience = parse_int(key, value);
        else if (key == "train.curriculum_epochs")
            cfg.train.curriculum_epochs = parse_int_list(key, value);
        else if (key == "train.curriculum_lengths")
            cfg.train.curriculum_lengths = parse_int_list(key, value);
        else if (key == "train.noise_sigma") cfg.train.noise_sigma = parse_double(key, value);
        else if (key == "train.dtw_width")
            cfg.train.dtw_width = static_cast<size_t>(parse_int(key, value));
        else if (key == "train.seed") cfg.train.seed = parse_u64(key, value);
        else if (key == "train.runs") cfg.train.runs = parse_int(key, value);
        else if (key == "train.folds") cfg.train.folds = parse_int(key, value);
        else
            throw ParameterError("config: unknown key '" + key + "' (line " +
                                 std::to_string(line_no) + ")");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string render_config(const ExperimentConfig& c) {
    std::string out;
    out += "data.name = " + c.dataset_name + "\n";
    out += "data.root = " + c.data_root + "\n";
    out += "model.conv_filters = " + std::to_string(c.model.conv_filters) + "\n";
    out += "model.dropout = " + fmt(c.model.dropout) + "\n";
    out += "model.ffn_dim = " + std::to_string(c.model.ffn_dim) + "\n";
    out += "model.heads = " + std::to_string(c.model.heads) + "\n";
    out += "model.kind = " + to_string(c.model.kind) + "\n";
    out += "model.layers = " + std::to_string(c.model.layers) + "\n";
    out += "model.lstm_units = " + std::to_string(c.model.lstm_units) + "\n";
    out += "model.model_dim = " + std::to_string(c.model.model_dim) + "\n";
    out += "model.num_classes = " + std::to_string(c.model.num_classes) + "\n";
    out += "model.positional_encoding = " +
           std::string(c.model.positional_encoding ? "true" : "false") + "\n";
    out += "out.dir = " + c.out_dir + "\n";
    out += "run.checked = " + std::string(c.checked ? "true" : "false") + "\n";
    out += "train.batch_size = " + std::to_string(c.train.batch_size) + "\n";
    out += "train.clip_norm = " + fmt(c.train.clip_norm) + "\n";
    out += "train.curriculum_epochs = " + join(c.train.curriculum_epochs) + "\n";
    out += "train.curriculum_lengths = " + join(c.train.curriculum_lengths) + "\n";
    out += "train.cycle_epochs = " + std::to_string(c.train.cycle_epochs) + "\n";
    out += "train.dtw_width = " + std::to_string(c.train.dtw_width) + "\n";
    out += "train.epochs = " + std::to_string(c.train.epochs) + "\n";
    out += "train.folds = " + std::to_string(c.train.folds) + "\n";
    out += "train.label_smoothing = " + fmt(c.train.label_smoothing) + "\n";
    out += "train.lr_base = " + fmt(c.train.lr_base) + "\n";
    out += "train.lr_max = " + fmt(c.train.lr_max) + "\n";
    out += "train.noise_sigma = " + fmt(c.train.noise_sigma) + "\n";
    out += "train.patience = " + std::to_string(c.train.patience) + "\n";
    out += "train.runs = " + std::to_string(c.train.runs) + "\n";
    out += "train.seed = " + std::to_string(c.train.seed) + "\n";
    out += "train.weight_decay = " + fmt(c.train.weight_decay) + "\n";
    return out;
}

void write_resolved_config(const std::filesystem::path& path, const ExperimentConfig& config) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("write_resolved_config: cannot open " + path.string());
    out << render_config(config);
}

} // namespace slr
