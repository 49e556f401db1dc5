#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "factcheck/errors.hpp"

namespace factcheck {

// Six-point ordinal veracity scale, worst to best. The integer value of each
// enumerator is its ordinal index; every metric and the score-to-label mapping
// rely on this single ordering.
enum class VeracityLabel {
    PantsOnFire = 0,
    False = 1,
    BarelyTrue = 2,
    HalfTrue = 3,
    MostlyTrue = 4,
    True = 5,
};

inline constexpr int kNumLabels = 6;

inline constexpr std::array<VeracityLabel, kNumLabels> all_labels() {
    return {VeracityLabel::PantsOnFire, VeracityLabel::False,     VeracityLabel::BarelyTrue,
            VeracityLabel::HalfTrue,    VeracityLabel::MostlyTrue, VeracityLabel::True};
}

inline int label_index(VeracityLabel label) { return static_cast<int>(label); }

inline VeracityLabel label_from_index(int i) {
    if (i < 0 || i >= kNumLabels) {
        throw InvalidLabelIndex("label index out of range: " + std::to_string(i));
    }
    return static_cast<VeracityLabel>(i);
}

inline std::string_view label_name(VeracityLabel label) {
    static constexpr std::array<std::string_view, kNumLabels> names = {
        "pants-on-fire", "false", "barely-true", "half-true", "mostly-true", "true"};
    return names[static_cast<std::size_t>(label_index(label))];
}

inline std::optional<VeracityLabel> try_label_from_name(std::string_view name) {
    for (auto l : all_labels()) {
        if (label_name(l) == name) return l;
    }
    return std::nullopt;
}

inline VeracityLabel label_from_name(std::string_view name) {
    auto l = try_label_from_name(name);
    if (!l) throw InvalidLabelName("unknown veracity label: " + std::string(name));
    return *l;
}

}  // namespace factcheck
