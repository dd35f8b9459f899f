#pragma once

#include "amortize/coalgebra.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace amortize {

struct CatalogEntry {
    std::string name;
    std::string summary;
    // Cases expected to fail; excluded from `all`.
    bool negative_control = false;
    std::function<VerificationCase()> make;
};

// Every registered case, sorted by name.
const std::vector<CatalogEntry>& catalog();

// nullptr when no such case is registered.
const CatalogEntry* find_case(std::string_view name);

// Throws InvalidCase for unknown names.
VerificationCase make_case(std::string_view name);

}  // namespace amortize
