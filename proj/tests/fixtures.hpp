#pragma once

#include <vector>

#include "hmdrec/data/generator.hpp"
#include "hmdrec/data/preparation.hpp"

namespace fixture {

/// Three-subject cohort shared across tests; generated once.
inline const std::vector<hmdrec::data::Trial>& small_cohort() {
    static const std::vector<hmdrec::data::Trial> trials = [] {
        hmdrec::data::GeneratorConfig cfg;
        cfg.subjects = 3;
        cfg.seed = 17;
        return hmdrec::data::generate_cohort(cfg);
    }();
    return trials;
}

inline const hmdrec::data::DatasetSplit& small_split() {
    static const hmdrec::data::DatasetSplit split = hmdrec::data::split_dataset(small_cohort());
    return split;
}

}  // namespace fixture
