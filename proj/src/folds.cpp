#include "slrbench/folds.hpp"

#include <algorithm>

namespace slr {

FoldPlan signer_independent_folds(const DatasetManifest& manifest, int folds, const Rng& rng) {
    if (folds < 1) throw ParameterError("signer_independent_folds: need at least one fold");
    std::vector<std::string> signers(manifest.signers.begin(), manifest.signers.end());
    if (signers.size() < static_cast<size_t>(folds))
        throw ProtocolError("signer_independent_folds: " + std::to_string(signers.size()) +
                            " signers cannot fill " + std::to_string(folds) + " folds");

    // signers is sorted (set order); shuffle with the dedicated stream so
    // the plan depends only on (seed, signer inventory).
    Rng shuffle_rng = rng.child("folds/shuffle");
    shuffle_rng.shuffle(signers.begin(), signers.end());

    FoldPlan plan;
    plan.folds.resize(static_cast<size_t>(folds));
    for (size_t i = 0; i < signers.size(); ++i)
        plan.signer_fold[signers[i]] = static_cast<int>(i % static_cast<size_t>(folds));

    for (int f = 0; f < folds; ++f) {
        FoldSplit& split = plan.folds[static_cast<size_t>(f)];

        std::vector<std::string> rest;
        for (const auto& s : signers)
            if (plan.signer_fold.at(s) != f) rest.push_back(s);
        // Seeded validation signer, fixed per fold across runs.
        Rng pick = rng.child("folds/val/" + std::to_string(f));
        split.val_signer = rest[pick.below(rest.size())];

        for (const auto& sample : manifest.samples) {
            if (plan.signer_fold.at(sample.signer) == f)
                split.test_ids.push_back(sample.id);
            else if (sample.signer == split.val_signer)
                split.val_ids.push_back(sample.id);
            else
                split.train_ids.push_back(sample.id);
        }
        if (split.train_ids.empty() || split.val_ids.empty() || split.test_ids.empty())
            throw ProtocolError("signer_independent_folds: fold " + std::to_string(f) +
                                " has an empty split");
    }
    return plan;
}

} // namespace slr
