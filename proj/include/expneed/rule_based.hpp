#ifndef EXPNEED_RULE_BASED_HPP
#define EXPNEED_RULE_BASED_HPP

#include <algorithm>
#include <string_view>

#include "expneed/features.hpp"

namespace expneed {

/// Baseline detector: a review expresses an explanation need iff its raw text
/// contains '?' or the whole word "why" (any case, word boundaries as in
/// tokenize()).
struct RulePrediction {
    bool question_mark = false;
    bool why = false;

    bool explanation_need() const noexcept { return question_mark || why; }

    friend bool operator==(const RulePrediction&, const RulePrediction&) = default;
};

inline RulePrediction classify_rule_based(std::string_view text) {
    RulePrediction p;
    p.question_mark = text.find('?') != std::string_view::npos;
    const auto tokens = tokenize(text);
    p.why = std::find(tokens.begin(), tokens.end(), "why") != tokens.end();
    return p;
}

}  // namespace expneed

#endif
