#pragma once

#include <stdexcept>
#include <string>

namespace nervekit {

// A computation would exceed the configured cell budget.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nervekit
