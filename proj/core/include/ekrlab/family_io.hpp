#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ekrlab/combinat.hpp"

namespace ekrlab {

/// Family file format: a `# n=<n> k=<k>` header, then one k-set per line as
/// space-separated sorted 1-based elements. Blank lines are ignored; extra
/// `#` lines are treated as comments. A `# family ...` comment starts a new
/// family block in multi-family files.
void write_family(std::ostream& os, const RankedFamily& f);
void write_families(std::ostream& os, const std::vector<RankedFamily>& fams);

RankedFamily read_family(std::istream& is);
std::vector<RankedFamily> read_families(std::istream& is);

void write_family_file(const std::string& path, const RankedFamily& f);
RankedFamily read_family_file(const std::string& path);

}  // namespace ekrlab
