#pragma once

// Frame of discernment, hyper-power-set elements and constraint models.
//
// An element of D^Theta is stored as the set of Venn regions it covers. A
// region is identified by the non-empty set of atoms that contain it, encoded
// as a bit mask `r` in [1, 2^n - 1]; region `r` lives at bit `r - 1` of the
// element's word array. With this encoding meet and join are bitwise AND/OR.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "dsmf/errors.hpp"

namespace dsmf {

class Frame {
 public:
  // 2^Theta operations only need region masks up to 2^16 - 1.
  static constexpr std::size_t kMaxAtoms = 16;
  // Full D^Theta enumeration grows like the Dedekind numbers.
  static constexpr std::size_t kMaxLatticeAtoms = 5;

  explicit Frame(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    require(!atoms_.empty(), "frame needs at least one atom");
    require(atoms_.size() <= kMaxAtoms,
            "frame has " + std::to_string(atoms_.size()) + " atoms, cap is " +
                std::to_string(kMaxAtoms));
    std::unordered_set<std::string> seen;
    for (const auto& name : atoms_) {
      require(valid_atom_name(name), "invalid atom name '" + name + "'");
      require(seen.insert(name).second, "duplicate atom name '" + name + "'");
    }
    // FNV-1a over the ordered names; elements carry it to detect mixing frames.
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& name : atoms_) {
      for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
      }
      h ^= 0xff;
      h *= 1099511628211ULL;
    }
    id_ = h;
  }

  static bool valid_atom_name(std::string_view name) {
    if (name.empty()) return false;
    if (name.front() == '#' || name.front() == '@') return false;
    return std::none_of(name.begin(), name.end(), [](char c) {
      return c == '&' || c == '|' || c == '(' || c == ')' || c == '~' || c == ',' ||
             c == ';' || c == ':' || c == '"' || static_cast<unsigned char>(c) <= ' ';
    });
  }

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::string& name(std::size_t i) const { return atoms_.at(i); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  std::uint64_t id() const noexcept { return id_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::find(atoms_.begin(), atoms_.end(), name);
    if (it == atoms_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  std::uint32_t region_count() const noexcept {
    return (std::uint32_t{1} << atoms_.size()) - 1;
  }
  std::size_t word_count() const noexcept { return (region_count() + 63) / 64; }

  friend bool operator==(const Frame& a, const Frame& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<std::string> atoms_;
  std::uint64_t id_ = 0;
};

using FrameRef = std::shared_ptr<const Frame>;

inline FrameRef make_frame(std::vector<std::string> names) {
  return std::make_shared<const Frame>(std::move(names));
}

class LatticeElement {
 public:
  // Inline storage covers frames up to 10 atoms (1023 regions).
  using Words = boost::container::small_vector<std::uint64_t, 16>;

  LatticeElement() = default;

  static LatticeElement empty(const Frame& frame) { return LatticeElement(frame); }

  static LatticeElement full(const Frame& frame) {
    LatticeElement e(frame);
    for (std::uint32_t r = 1; r <= e.regions_; ++r) e.set_region(r);
    return e;
  }

  static LatticeElement atom(const Frame& frame, std::size_t index) {
    require(index < frame.size(), "atom index out of range");
    LatticeElement e(frame);
    const std::uint32_t bit = std::uint32_t{1} << index;
    for (std::uint32_t r = 1; r <= e.regions_; ++r)
      if (r & bit) e.set_region(r);
    return e;
  }

  // Union of the given atoms (an element of 2^Theta).
  static LatticeElement atom_union(const Frame& frame, std::uint32_t atom_mask) {
    LatticeElement e(frame);
    for (std::uint32_t r = 1; r <= e.regions_; ++r)
      if (r & atom_mask) e.set_region(r);
    return e;
  }

  // Intersection of the given atoms: every region containing all of them.
  static LatticeElement atom_meet(const Frame& frame, std::uint32_t atom_mask) {
    require(atom_mask != 0, "conjunction needs at least one atom");
    LatticeElement e(frame);
    for (std::uint32_t r = 1; r <= e.regions_; ++r)
      if ((r & atom_mask) == atom_mask) e.set_region(r);
    return e;
  }

  static LatticeElement from_regions(const Frame& frame, const std::vector<std::uint32_t>& regions) {
    LatticeElement e(frame);
    for (auto r : regions) {
      require(r >= 1 && r <= e.regions_, "region code out of range");
      e.set_region(r);
    }
    return e;
  }

  std::uint64_t frame_id() const noexcept { return frame_id_; }
  std::uint32_t region_capacity() const noexcept { return regions_; }
  std::size_t atom_count() const noexcept { return static_cast<std::size_t>(std::bit_width(regions_)); }

  bool is_empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  // Number of Venn regions covered.
  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool has_region(std::uint32_t r) const noexcept {
    return r >= 1 && r <= regions_ && ((words_[(r - 1) / 64] >> ((r - 1) % 64)) & 1U);
  }

  std::vector<std::uint32_t> regions() const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(b) + 1));
        bits &= bits - 1;
      }
    }
    return out;
  }

  bool subset_of(const LatticeElement& other) const {
    check_same_frame(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~other.words_[w]) return false;
    return true;
  }

  bool intersects(const LatticeElement& other) const {
    check_same_frame(other);
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & other.words_[w]) return true;
    return false;
  }

  std::size_t meet_size(const LatticeElement& other) const {
    check_same_frame(other);
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
      n += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
    return n;
  }

  friend LatticeElement meet(const LatticeElement& a, const LatticeElement& b) {
    a.check_same_frame(b);
    LatticeElement out = a;
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] &= b.words_[w];
    return out;
  }

  friend LatticeElement join(const LatticeElement& a, const LatticeElement& b) {
    a.check_same_frame(b);
    LatticeElement out = a;
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] |= b.words_[w];
    return out;
  }

  // Regions of `a` not in `b`.
  friend LatticeElement difference(const LatticeElement& a, const LatticeElement& b) {
    a.check_same_frame(b);
    LatticeElement out = a;
    for (std::size_t w = 0; w < out.words_.size(); ++w) out.words_[w] &= ~b.words_[w];
    return out;
  }

  friend bool operator==(const LatticeElement& a, const LatticeElement& b) {
    return a.frame_id_ == b.frame_id_ && a.words_ == b.words_;
  }

  // Canonical order: fewer regions first, then by encoding read as an integer.
  friend bool canonical_less(const LatticeElement& a, const LatticeElement& b) {
    const auto sa = a.size();
    const auto sb = b.size();
    if (sa != sb) return sa < sb;
    for (std::size_t w = a.words_.size(); w-- > 0;)
      if (a.words_[w] != b.words_[w]) return a.words_[w] < b.words_[w];
    return false;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = frame_id_;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }

  const Words& words() const noexcept { return words_; }

 private:
  explicit LatticeElement(const Frame& frame)
      : frame_id_(frame.id()), regions_(frame.region_count()), words_(frame.word_count(), 0) {}

  void set_region(std::uint32_t r) { words_[(r - 1) / 64] |= std::uint64_t{1} << ((r - 1) % 64); }

  void check_same_frame(const LatticeElement& other) const {
    if (frame_id_ != other.frame_id_ || regions_ != other.regions_)
      throw ValidationError("lattice elements belong to different frames");
  }

  std::uint64_t frame_id_ = 0;
  std::uint32_t regions_ = 0;
  Words words_;
};

struct LatticeElementHash {
  std::size_t operator()(const LatticeElement& e) const noexcept { return e.hash(); }
};

struct CanonicalLess {
  bool operator()(const LatticeElement& a, const LatticeElement& b) const { return canonical_less(a, b); }
};

inline void check_frame(const Frame& frame, const LatticeElement& x) {
  if (x.frame_id() != frame.id() || x.region_capacity() != frame.region_count())
    throw ValidationError("element does not belong to this frame");
}

// Minimal regions of x: those with no immediate sub-region inside x. Every
// element built from atoms, or reduced by a constraint model, is convex in the
// region order, so immediate sub-regions suffice.
inline std::vector<std::uint32_t> minimal_regions(const LatticeElement& x) {
  std::vector<std::uint32_t> out;
  for (auto r : x.regions()) {
    bool minimal = true;
    for (std::uint32_t rest = r; rest && minimal; rest &= rest - 1) {
      const std::uint32_t sub = r & ~(rest & (~rest + 1));
      if (sub != 0 && x.has_region(sub)) minimal = false;
    }
    if (minimal) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return out;
}

// u(x): join of every atom that occurs in a minimal conjunction of x.
inline LatticeElement union_decomposition(const Frame& frame, const LatticeElement& x) {
  check_frame(frame, x);
  require(!x.is_empty(), "union decomposition of the empty element");
  std::uint32_t atoms = 0;
  for (auto r : minimal_regions(x)) atoms |= r;
  return LatticeElement::atom_union(frame, atoms);
}

enum class ModelKind { Free, Shafer, Hybrid };

class ConstraintModel;
using ModelRef = std::shared_ptr<const ConstraintModel>;

// Declares which elements are identified with the empty set. The declared
// elements are folded into one set of forbidden regions; an element is empty
// under the model iff all its regions are forbidden, which makes the empty
// family closed downward and under union.
class ConstraintModel {
 public:
  static ModelRef free(FrameRef frame) {
    auto forbidden = LatticeElement::empty(*frame);
    return ModelRef(new ConstraintModel(std::move(frame), ModelKind::Free, std::move(forbidden), {}));
  }

  static ModelRef shafer(FrameRef frame) {
    std::vector<std::uint32_t> pairs;
    for (std::uint32_t r = 1; r <= frame->region_count(); ++r)
      if (std::popcount(r) >= 2) pairs.push_back(r);
    auto forbidden = LatticeElement::from_regions(*frame, pairs);
    return ModelRef(new ConstraintModel(std::move(frame), ModelKind::Shafer, std::move(forbidden), {}));
  }

  static ModelRef hybrid(FrameRef frame, std::vector<LatticeElement> empties) {
    auto forbidden = LatticeElement::empty(*frame);
    for (const auto& e : empties) {
      check_frame(*frame, e);
      forbidden = join(forbidden, e);
    }
    for (std::size_t i = 0; i < frame->size(); ++i)
      require(!LatticeElement::atom(*frame, i).subset_of(forbidden),
              "constraint model would make atom '" + frame->name(i) + "' empty");
    return ModelRef(
        new ConstraintModel(std::move(frame), ModelKind::Hybrid, std::move(forbidden), std::move(empties)));
  }

  const Frame& frame() const noexcept { return *frame_; }
  const FrameRef& frame_ref() const noexcept { return frame_; }
  ModelKind kind() const noexcept { return kind_; }
  const LatticeElement& forbidden() const noexcept { return forbidden_; }
  const std::vector<LatticeElement>& declared_empty() const noexcept { return declared_; }

  bool is_empty(const LatticeElement& x) const {
    check_frame(*frame_, x);
    return x.subset_of(forbidden_);
  }

  // Canonical representative of x under the model: its non-forbidden regions.
  LatticeElement reduce(const LatticeElement& x) const {
    check_frame(*frame_, x);
    return difference(x, forbidden_);
  }

  std::size_t cardinality(const LatticeElement& x) const { return reduce(x).size(); }

  LatticeElement full() const { return reduce(LatticeElement::full(*frame_)); }

  // True when every element empty under `weaker` is also empty here.
  bool refines(const ConstraintModel& weaker) const {
    return *frame_ == *weaker.frame_ && weaker.forbidden_.subset_of(forbidden_);
  }

  friend bool operator==(const ConstraintModel& a, const ConstraintModel& b) {
    return *a.frame_ == *b.frame_ && a.forbidden_ == b.forbidden_;
  }

 private:
  ConstraintModel(FrameRef frame, ModelKind kind, LatticeElement forbidden, std::vector<LatticeElement> declared)
      : frame_(std::move(frame)), kind_(kind), forbidden_(std::move(forbidden)), declared_(std::move(declared)) {}

  FrameRef frame_;
  ModelKind kind_;
  LatticeElement forbidden_;
  std::vector<LatticeElement> declared_;
};

inline bool is_empty_under(const LatticeElement& x, const ConstraintModel& model) { return model.is_empty(x); }

// Number of Venn regions of x that the model does not forbid.
inline std::size_t dsm_cardinality(const LatticeElement& x, const ConstraintModel& model) {
  return model.cardinality(x);
}

// D^Theta: every up-closed family of regions (unions of atom conjunctions),
// including the empty element, in canonical order.
inline std::vector<LatticeElement> enumerate_dsm_lattice(const Frame& frame) {
  require(frame.size() <= Frame::kMaxLatticeAtoms,
          "D^Theta enumeration supports at most " + std::to_string(Frame::kMaxLatticeAtoms) + " atoms");
  const std::uint32_t n = static_cast<std::uint32_t>(frame.size());
  std::vector<std::uint32_t> order;
  for (std::uint32_t r = 1; r <= frame.region_count(); ++r) order.push_back(r);
  std::sort(order.begin(), order.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa > pb : a < b;
  });

  // Regions are decided from the largest down, so every superset of a region is
  // already decided when the region is reached.
  std::vector<bool> chosen(frame.region_count() + 1, false);
  std::vector<std::uint32_t> current;
  std::vector<LatticeElement> out;
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      out.push_back(LatticeElement::from_regions(frame, current));
      return;
    }
    const std::uint32_t r = order[k];
    self(self, k + 1);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t up = r | (std::uint32_t{1} << i);
      if (up != r && !chosen[up]) return;
    }
    chosen[r] = true;
    current.push_back(r);
    self(self, k + 1);
    current.pop_back();
    chosen[r] = false;
  };
  recurse(recurse, 0);
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

// 2^Theta: the empty element and every union of atoms, in canonical order.
inline std::vector<LatticeElement> enumerate_power_set(const Frame& frame) {
  std::vector<LatticeElement> out;
  out.push_back(LatticeElement::empty(frame));
  const std::uint32_t limit = std::uint32_t{1} << frame.size();
  for (std::uint32_t mask = 1; mask < limit; ++mask) out.push_back(LatticeElement::atom_union(frame, mask));
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

}  // namespace dsmf

template <>
struct std::hash<dsmf::LatticeElement> {
  std::size_t operator()(const dsmf::LatticeElement& e) const noexcept { return e.hash(); }
};
