#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgm {

using VertexId = std::uint32_t;
using GraphId = std::uint32_t;
using LabelId = std::int32_t;

inline constexpr LabelId kNoLabel = -1;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sgm
