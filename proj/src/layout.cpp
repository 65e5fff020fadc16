#include "qcert/layout.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qcert {

SystemLayout SystemLayout::make(std::vector<Site> sites, long max_total_dim) {
  std::set<std::string> seen;
  long total = 1;
  for (const auto& s : sites) {
    if (s.label.empty()) throw ValidationError("layout: empty site label");
    if (!seen.insert(s.label).second)
      throw ValidationError("layout: duplicate site label '" + s.label + "'");
    if (s.dim < 1)
      throw ValidationError("layout: site '" + s.label + "' has dimension " + std::to_string(s.dim));
    if (total > max_total_dim / s.dim)
      throw CapacityError("layout: total dimension exceeds " + std::to_string(max_total_dim));
    total *= s.dim;
  }
  SystemLayout out;
  out.sites_ = std::move(sites);
  out.total_dim_ = total;
  return out;
}

SystemLayout SystemLayout::qubits(long n, const std::string& prefix) {
  if (n < 0) throw ValidationError("layout: negative qubit count");
  std::vector<Site> sites;
  sites.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) sites.push_back({prefix + std::to_string(i), 2});
  return make(std::move(sites));
}

std::vector<long> SystemLayout::dims() const {
  std::vector<long> d;
  d.reserve(sites_.size());
  for (const auto& s : sites_) d.push_back(s.dim);
  return d;
}

std::vector<long> SystemLayout::strides() const {
  std::vector<long> s(sites_.size(), 1);
  for (long i = size() - 2; i >= 0; --i) s[i] = s[i + 1] * sites_[i + 1].dim;
  return s;
}

SystemLayout SystemLayout::restricted(const Region& region) const {
  region.require_within(*this);
  std::vector<Site> picked;
  picked.reserve(region.sites().size());
  for (long i : region.sites()) picked.push_back(sites_[i]);
  return make(std::move(picked));
}

bool SystemLayout::operator==(const SystemLayout& other) const {
  if (sites_.size() != other.sites_.size()) return false;
  for (size_t i = 0; i < sites_.size(); ++i)
    if (sites_[i].label != other.sites_[i].label || sites_[i].dim != other.sites_[i].dim)
      return false;
  return true;
}

Region Region::of(std::vector<long> sites) {
  std::sort(sites.begin(), sites.end());
  for (size_t i = 0; i < sites.size(); ++i) {
    if (sites[i] < 0) throw RegionError("region: negative site index");
    if (i > 0 && sites[i] == sites[i - 1])
      throw RegionError("region: duplicate site index " + std::to_string(sites[i]));
  }
  Region r;
  r.sites_ = std::move(sites);
  return r;
}

Region Region::single(long site) { return of({site}); }

Region Region::range(long first, long last) {
  if (first < 0 || last < first) throw RegionError("region: bad range");
  std::vector<long> s;
  s.reserve(static_cast<size_t>(last - first));
  for (long i = first; i < last; ++i) s.push_back(i);
  Region r;
  r.sites_ = std::move(s);
  return r;
}

bool Region::contains(long site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::disjoint_from(const Region& other) const {
  return intersected(other).empty();
}

bool Region::subset_of(const Region& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

Region Region::unioned(const Region& other) const {
  std::vector<long> out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out));
  Region r;
  r.sites_ = std::move(out);
  return r;
}

Region Region::intersected(const Region& other) const {
  std::vector<long> out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
  Region r;
  r.sites_ = std::move(out);
  return r;
}

Region Region::difference(const Region& other) const {
  std::vector<long> out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out));
  Region r;
  r.sites_ = std::move(out);
  return r;
}

Region Region::complement(long n_sites) const {
  return range(0, n_sites).difference(*this);
}

Region Region::positions_in(const Region& enclosing) const {
  if (!subset_of(enclosing))
    throw RegionError("region " + to_string() + " is not contained in " + enclosing.to_string());
  std::vector<long> pos;
  pos.reserve(sites_.size());
  size_t j = 0;
  for (long p = 0; p < enclosing.size(); ++p) {
    if (j < sites_.size() && enclosing.sites()[p] == sites_[j]) {
      pos.push_back(p);
      ++j;
    }
  }
  Region r;
  r.sites_ = std::move(pos);
  return r;
}

void Region::require_within(const SystemLayout& layout) const {
  if (!sites_.empty() && sites_.back() >= layout.size())
    throw RegionError("region " + to_string() + " exceeds layout with " +
                      std::to_string(layout.size()) + " sites");
}

std::string Region::to_string() const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < sites_.size(); ++i) {
    if (i) os << ',';
    os << sites_[i];
  }
  os << '}';
  return os.str();
}

}  // namespace qcert
