#include "slrbench/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "slrbench/classifier.hpp"
#include "slrbench/metrics.hpp"

namespace slr {

EvalMetrics evaluate_model(const ModelConfig& config, const ParamSet<float>& params,
                           const std::vector<LandmarkSequence>& samples, int batch_size) {
    if (samples.empty()) throw ProtocolError("evaluate: empty evaluation set");
    if (batch_size < 1) throw ParameterError("evaluate: batch size must be positive");

    Classifier<float> model(config, params);
    const size_t n = samples.size();
    const auto k = static_cast<size_t>(config.num_classes);
    TensorF logits({n, k});
    std::vector<int> truths(n);

    for (size_t start = 0; start < n; start += static_cast<size_t>(batch_size)) {
        const size_t stop = std::min(n, start + static_cast<size_t>(batch_size));
        const size_t b = stop - start;
        TensorF batch({b, kStandardFrames, kFeatDim});
        for (size_t i = start; i < stop; ++i) {
            const auto& s = samples[i];
            if (s.num_frames() != kStandardFrames)
                throw ProtocolError("evaluate: sample " + s.id +
                                    " is not standardized to 64 frames");
            if (s.label < 0 || s.label >= config.num_classes)
                throw ProtocolError("evaluate: sample " + s.id + " has an out-of-range label");
            std::copy_n(s.frames.data(), s.frames.size(),
                        batch.data() + (i - start) * kStandardFrames * kFeatDim);
            truths[i] = s.label;
        }
        const TensorF out = model.infer(batch);
        std::copy_n(out.data(), out.size(), logits.data() + start * k);
    }

    EvalMetrics metrics;
    metrics.top1 = top_k_accuracy(logits, truths, 1);
    metrics.top5 = top_k_accuracy(logits, truths, std::min<int>(5, static_cast<int>(k)));
    return metrics;
}

RunReport aggregate(const std::string& model, const std::string& dataset,
                    const std::vector<CellResult>& cells, int folds, int runs) {
    const size_t expected = static_cast<size_t>(folds) * static_cast<size_t>(runs);
    RunReport report;
    report.model = model;
    report.dataset = dataset;

    std::set<std::pair<int, uint64_t>> seen;
    for (const auto& cell : cells) {
        if (cell.model != model) continue;
        if (cell.fold < 0 || cell.fold >= folds)
            throw ProtocolError("aggregate: fold " + std::to_string(cell.fold) +
                                " outside [0, " + std::to_string(folds) + ")");
        if (!seen.insert({cell.fold, cell.seed}).second)
            throw ProtocolError("aggregate: duplicate cell (fold " + std::to_string(cell.fold) +
                                ", seed " + std::to_string(cell.seed) + ")");
        report.cells.push_back(cell);
    }
    if (report.cells.size() != expected)
        throw ProtocolError("aggregate: model " + model + " has " +
                            std::to_string(report.cells.size()) + " cells, expected " +
                            std::to_string(expected));
    // Parallel grids finish cells in arbitrary order; fix the order so the
    // aggregation arithmetic and the CSV rows are reproducible.
    std::sort(report.cells.begin(), report.cells.end(),
              [](const CellResult& a, const CellResult& b) {
                  return a.fold != b.fold ? a.fold < b.fold : a.seed < b.seed;
              });
    for (int f = 0; f < folds; ++f) {
        const auto count = std::count_if(report.cells.begin(), report.cells.end(),
                                         [f](const CellResult& c) { return c.fold == f; });
        if (count != runs)
            throw ProtocolError("aggregate: fold " + std::to_string(f) + " has " +
                                std::to_string(count) + " runs, expected " +
                                std::to_string(runs));
    }

    auto mean_std = [&](auto getter, double& mean, double& std_out) {
        double sum = 0.0;
        for (const auto& c : report.cells) sum += getter(c);
        mean = sum / static_cast<double>(report.cells.size());
        double sq = 0.0;
        for (const auto& c : report.cells) {
            const double d = getter(c) - mean;
            sq += d * d;
        }
        std_out = report.cells.size() > 1
                      ? std::sqrt(sq / static_cast<double>(report.cells.size() - 1))
                      : 0.0;
    };
    mean_std([](const CellResult& c) { return c.top1; }, report.top1_mean, report.top1_std);
    mean_std([](const CellResult& c) { return c.top5; }, report.top5_mean, report.top5_std);
    return report;
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<RunReport>& reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("write_results_csv: cannot open " + path.string());
    out << "model,dataset,fold,seed,top1,top5\n";
    char line[256];
    for (const auto& r : reports) {
        for (const auto& c : r.cells) {
            std::snprintf(line, sizeof line, "%s,%s,%d,%llu,%.10g,%.10g\n", r.model.c_str(),
                          r.dataset.c_str(), c.fold,
                          static_cast<unsigned long long>(c.seed), c.top1, c.top5);
            out << line;
        }
        std::snprintf(line, sizeof line, "%s,%s,all,mean,%.10g,%.10g\n", r.model.c_str(),
                      r.dataset.c_str(), r.top1_mean, r.top5_mean);
        out << line;
        std::snprintf(line, sizeof line, "%s,%s,all,std,%.10g,%.10g\n", r.model.c_str(),
                      r.dataset.c_str(), r.top1_std, r.top5_std);
        out << line;
    }
}

void write_markdown_table(const std::filesystem::path& path,
                          const std::vector<RunReport>& reports) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("write_markdown_table: cannot open " + path.string());
    const std::string dataset = reports.empty() ? "dataset" : reports.front().dataset;
    out << "| Model | " << dataset << " Top-1 | " << dataset << " Top-5 |\n";
    out << "|---|---|---|\n";
    char line[256];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "| %s | %.3f ± %.3f | %.3f ± %.3f |\n",
                      r.model.c_str(), r.top1_mean, r.top1_std, r.top5_mean, r.top5_std);
        out << line;
    }
}

} // namespace slr
