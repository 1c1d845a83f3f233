#pragma once

#include <string_view>
#include <vector>

#include "asympt/families.hpp"
#include "asympt/phicat.hpp"

namespace asympt {

/// Parses `name[:key=value,...]` family strings:
///   poisson | gamma | binomial:p=1/3 | nb:p=1/2 (alias negbinomial)
///   iid:mgf=1;1/2;1/3,mean=1/2 | iid:values=0;1,probs=2/3;1/3
/// Numbers are exact rationals (`a/b`, decimals, exponents). Errors are
/// parameter_error with the offending column marked.
FamilySpec parse_family(std::string_view text);

/// Parses power:r=<q>,a=<q> | log:beta=<q> | xlogx.
PhiSpec parse_phi(std::string_view text);

/// `start:end:xF` (geometric, factor F > 1, end inclusive) or a comma list.
std::vector<double> parse_grid(std::string_view text);

} // namespace asympt
