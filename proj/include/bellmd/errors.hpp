#pragma once

#include <stdexcept>
#include <string>

namespace bellmd {

struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_strategy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bellmd
