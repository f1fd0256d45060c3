#include "ekrlab/family_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ekrlab {

namespace {

void write_header(std::ostream& os, const Universe& u) {
  os << "# n=" << u.n() << " k=" << u.k() << "\n";
}

void write_members(std::ostream& os, const RankedFamily& f) {
  f.for_each_bits([&](uint64_t bits) {
    bool first = true;
    for (int e = 0; e < 64; ++e)
      if (bits >> e & 1) {
        if (!first) os << ' ';
        os << (e + 1);
        first = false;
      }
    os << '\n';
  });
}

bool parse_header(const std::string& line, int& n, int& k) {
  int got = std::sscanf(line.c_str(), "# n=%d k=%d", &n, &k);
  return got == 2;
}

}  // namespace

void write_family(std::ostream& os, const RankedFamily& f) {
  write_header(os, *f.universe());
  write_members(os, f);
}

void write_families(std::ostream& os, const std::vector<RankedFamily>& fams) {
  if (fams.empty()) throw std::invalid_argument("write_families: nothing to write");
  write_header(os, *fams.front().universe());
  for (std::size_t i = 0; i < fams.size(); ++i) {
    os << "# family " << i << " size=" << fams[i].size() << "\n";
    write_members(os, fams[i]);
  }
}

std::vector<RankedFamily> read_families(std::istream& is) {
  std::string line;
  int n = -1, k = -1;
  UniversePtr u;
  std::vector<RankedFamily> out;
  bool block_open = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (n < 0) {
        if (!parse_header(line, n, k))
          throw std::runtime_error("family file: missing '# n=<n> k=<k>' header");
        u = make_universe(n, k);
        continue;
      }
      if (line.rfind("# family", 0) == 0) {
        out.emplace_back(u);
        block_open = true;
      }
      continue;
    }
    if (n < 0) throw std::runtime_error("family file: data before header");
    if (!block_open) {
      out.emplace_back(u);
      block_open = true;
    }
    std::istringstream ls(line);
    uint64_t bits = 0;
    int e;
    int count = 0;
    while (ls >> e) {
      if (e < 1 || e > n) throw std::runtime_error("family file: element out of range");
      bits |= uint64_t{1} << (e - 1);
      ++count;
    }
    if (count != k) throw std::runtime_error("family file: line is not a k-set");
    out.back().insert(bits);
  }
  if (n < 0) throw std::runtime_error("family file: empty input");
  if (out.empty()) out.emplace_back(u);  // header-only file = one empty family
  return out;
}

RankedFamily read_family(std::istream& is) {
  auto fams = read_families(is);
  if (fams.size() != 1) throw std::runtime_error("family file: expected a single family");
  return fams.front();
}

void write_family_file(const std::string& path, const RankedFamily& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_family(os, f);
}

RankedFamily read_family_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_family(is);
}

}  // namespace ekrlab
