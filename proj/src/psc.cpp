#include "cyclop/psc.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "cyclop/error.hpp"

namespace cyclop {

namespace {

void require_atomic(const ClosureInput& input) {
  for (const auto& theta : input.base)
    if (!theta.is_atomic())
      throw Error(ErrorCode::CompositeBase, "composite base substitution " + to_string(theta));
}

// Atomic substitutions over a fixed finite universe are total maps from the
// domain variables D onto atom indices; identity where unbound.
class AtomTable {
 public:
  explicit AtomTable(const ClosureInput& input) {
    VarSet domain = input.vars;
    for (const auto& theta : input.base) {
      auto d = theta.domain();
      domain.insert(d.begin(), d.end());
    }
    for (const auto& v : domain) intern(Term::var(v));
    domain_size_ = atoms_.size();
    for (const auto& theta : input.base)
      for (const auto& t : theta.image()) intern(t);
  }

  std::size_t domain_size() const { return domain_size_; }
  std::size_t index(const Term& t) const { return index_.at(t); }
  std::size_t var_index(const std::string& v) const { return index_.at(Term::var(v)); }

  std::vector<std::uint16_t> encode(const Substitution& theta) const {
    std::vector<std::uint16_t> out(domain_size_);
    for (std::size_t d = 0; d < domain_size_; ++d)
      out[d] = static_cast<std::uint16_t>(index(theta(atoms_[d].name)));
    return out;
  }

  Substitution decode(const std::vector<std::uint16_t>& code) const {
    std::map<std::string, Term> m;
    for (std::size_t d = 0; d < domain_size_; ++d) m.emplace(atoms_[d].name, atoms_[code[d]]);
    return Substitution(std::move(m));
  }

 private:
  void intern(const Term& t) {
    if (index_.emplace(t, atoms_.size()).second) atoms_.push_back(t);
  }

  std::vector<Term> atoms_;
  std::map<Term, std::size_t> index_;
  std::size_t domain_size_ = 0;
};

std::string pack(const std::vector<std::uint16_t>& code) {
  return std::string(reinterpret_cast<const char*>(code.data()), code.size() * 2);
}

}  // namespace

bool Closure::contains(const Substitution& theta) const {
  return std::find(elements.begin(), elements.end(), theta) != elements.end();
}

Closure psc(const ClosureInput& input) {
  require_atomic(input);
  const AtomTable atoms(input);
  const std::size_t n = atoms.domain_size();

  std::vector<std::vector<std::uint16_t>> codes;
  std::unordered_map<std::string, std::size_t> seen;
  Closure out;

  auto add = [&](std::vector<std::uint16_t> code, ClosureWitness w) {
    if (!seen.emplace(pack(code), codes.size()).second) return;
    codes.push_back(std::move(code));
    out.witnesses.push_back(std::move(w));
  };

  for (std::size_t i = 0; i < input.base.size(); ++i)
    add(atoms.encode(input.base[i]), {ClosureWitness::Kind::Base, i, 0, {}, {}});

  std::vector<std::size_t> vars;
  std::vector<std::string> names;
  for (const auto& v : input.vars) {
    vars.push_back(atoms.var_index(v));
    names.push_back(v);
  }

  auto composed = [&](std::size_t a, std::size_t b) {
    std::vector<std::uint16_t> r(n);
    for (std::size_t d = 0; d < n; ++d) {
      const std::uint16_t mid = codes[a][d];
      r[d] = mid < n ? codes[b][mid] : mid;
    }
    return r;
  };

  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t xi = 0; xi < vars.size(); ++xi) {
      for (std::size_t yi = 0; yi < vars.size(); ++yi) {
        auto r = codes[i];
        r[vars[xi]] = static_cast<std::uint16_t>(vars[yi]);
        add(std::move(r), {ClosureWitness::Kind::Override, i, 0, names[xi], names[yi]});
      }
    }
    for (std::size_t j = 0; j <= i; ++j) {
      add(composed(i, j), {ClosureWitness::Kind::Compose, i, j, {}, {}});
      if (j != i) add(composed(j, i), {ClosureWitness::Kind::Compose, j, i, {}, {}});
    }
  }

  out.elements.reserve(codes.size());
  for (const auto& c : codes) out.elements.push_back(atoms.decode(c));
  return out;
}

std::uint64_t psc_bound(const ClosureInput& input) {
  require_atomic(input);
  VarSet domain = input.vars;
  std::set<Term> image;
  for (const auto& v : input.vars) image.insert(Term::var(v));
  for (const auto& theta : input.base) {
    for (const auto& [x, t] : theta.bindings()) {
      domain.insert(x);
      image.insert(Term::var(x));
      image.insert(t);
    }
  }
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  const std::uint64_t base = image.size();
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (base != 0 && result > max / base) return max;
    result *= base;
  }
  return result;
}

bool replay_witnesses(const Closure& closure, const ClosureInput& input) {
  if (closure.elements.size() != closure.witnesses.size()) return false;
  std::vector<Substitution> rebuilt;
  for (std::size_t i = 0; i < closure.witnesses.size(); ++i) {
    const auto& w = closure.witnesses[i];
    Substitution s;
    switch (w.kind) {
      case ClosureWitness::Kind::Base:
        if (w.first >= input.base.size()) return false;
        s = input.base[w.first];
        break;
      case ClosureWitness::Kind::Override:
        if (w.first >= i || input.vars.count(w.from) == 0 || input.vars.count(w.to) == 0)
          return false;
        s = override(rebuilt[w.first], {{w.from, w.to}});
        break;
      case ClosureWitness::Kind::Compose:
        if (w.first >= i || w.second >= i) return false;
        s = compose(rebuilt[w.first], rebuilt[w.second]);
        break;
    }
    if (s != closure.elements[i]) return false;
    rebuilt.push_back(std::move(s));
  }
  std::set<Substitution> distinct(rebuilt.begin(), rebuilt.end());
  return distinct.size() == rebuilt.size();
}

}  // namespace cyclop
