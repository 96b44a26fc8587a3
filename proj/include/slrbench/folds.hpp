#pragma once

// Signer-independent cross-validation splits. Signers are shuffled with a
// seeded stream and dealt round-robin into folds; a fold's signers supply
// the test set, one seeded non-test signer supplies validation, the rest
// train. No signer ever appears on both sides of a split.

#include <map>
#include <string>
#include <vector>

#include "slrbench/landmark.hpp"
#include "slrbench/rng.hpp"

namespace slr {

struct FoldSplit {
    std::vector<std::string> train_ids;
    std::vector<std::string> val_ids;
    std::vector<std::string> test_ids;
    std::string val_signer;
};

struct FoldPlan {
    std::map<std::string, int> signer_fold; // signer id -> fold index
    std::vector<FoldSplit> folds;
};

FoldPlan signer_independent_folds(const DatasetManifest& manifest, int folds, const Rng& rng);

} // namespace slr
