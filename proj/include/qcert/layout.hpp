#pragma once

#include <string>
#include <vector>

#include "qcert/errors.hpp"

namespace qcert {

// Largest composite dimension the dense-matrix code paths will accept.
inline constexpr long kMaxTotalDim = 1L << 14;

struct Site {
  std::string label;
  long dim = 2;
};

class Region;

// Ordered list of sites with local dimensions. A site's index is its position
// in the list. Composite basis indices are row-major: the last site varies
// fastest.
class SystemLayout {
 public:
  SystemLayout() = default;  // no sites, total dimension 1

  // Throws ValidationError for empty/duplicate labels or dims < 1, and
  // CapacityError if the product of dimensions exceeds max_total_dim.
  static SystemLayout make(std::vector<Site> sites, long max_total_dim = kMaxTotalDim);
  static SystemLayout qubits(long n, const std::string& prefix = "q");

  long size() const { return static_cast<long>(sites_.size()); }
  long dim(long site) const { return sites_[site].dim; }
  const std::string& label(long site) const { return sites_[site].label; }
  const std::vector<Site>& sites() const { return sites_; }
  long total_dim() const { return total_dim_; }
  std::vector<long> dims() const;

  // Row-major strides: stride of the last site is 1.
  std::vector<long> strides() const;

  // Sub-layout over the region's sites, preserving order and labels.
  SystemLayout restricted(const Region& region) const;

  bool operator==(const SystemLayout& other) const;
  bool operator!=(const SystemLayout& other) const { return !(*this == other); }

 private:
  std::vector<Site> sites_;
  long total_dim_ = 1;
};

// Strictly increasing, duplicate-free list of site indices.
class Region {
 public:
  Region() = default;  // empty region

  // Sorts; throws RegionError on duplicates or negative indices.
  static Region of(std::vector<long> sites);
  static Region single(long site);
  static Region range(long first, long last);  // [first, last)

  const std::vector<long>& sites() const { return sites_; }
  long size() const { return static_cast<long>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(long site) const;
  bool disjoint_from(const Region& other) const;
  bool subset_of(const Region& other) const;

  Region unioned(const Region& other) const;
  Region intersected(const Region& other) const;
  Region difference(const Region& other) const;
  Region complement(long n_sites) const;

  // Positions this region's sites occupy inside an enclosing region.
  // Throws RegionError if this is not a subset of `enclosing`.
  Region positions_in(const Region& enclosing) const;

  // Throws RegionError if any index falls outside the layout.
  void require_within(const SystemLayout& layout) const;

  bool operator==(const Region& other) const = default;

  std::string to_string() const;

 private:
  std::vector<long> sites_;
};

}  // namespace qcert
