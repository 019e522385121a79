#pragma once

#include <array>
#include <string>
#include <string_view>

namespace weather {

// Canonical class labels in tie-break and serialization order.
inline constexpr std::array<std::string_view, 4> kClassLabels = {"clear", "haze", "low_light",
                                                                 "rain"};

inline bool is_canonical_label(std::string_view label) {
    for (std::string_view known : kClassLabels) {
        if (label == known) return true;
    }
    return false;
}

}  // namespace weather
