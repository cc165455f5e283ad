// Helpers shared by the normal-form and transition code.
#pragma once

#include <cstdint>
#include <vector>

#include "bioamb/ast.hpp"

namespace bioamb::detail {

/// Pulls every restriction reachable through parallel composition and
/// ambients out of `p`. Each hoisted name is renamed to
/// `(text, site, next++)`; the renamed names are appended to `restricted`
/// and the remaining restriction-free components (ambients keep their
/// restriction-free bodies) to `components`.
void hoist(const Process& p, std::uint32_t& next, std::vector<Name>& restricted, std::vector<Process>& components);

/// Structural text key. Names print by identity; when `shape` is set, names
/// with instance >= `placeholder_floor` print by site only.
std::string term_key(const Process& p, bool shape = false, std::uint32_t placeholder_floor = 0);

/// Wraps `body` in restrictions, first name outermost.
Process restrict_all(const std::vector<Name>& names, Process body);

}  // namespace bioamb::detail
