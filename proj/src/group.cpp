#include "obstower/group.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "obstower/error.hpp"

namespace obstower {

struct FiniteGroup::Impl {
  std::size_t n = 1;
  std::vector<Elem> table{0};
  std::vector<Elem> inverse{0};
  std::vector<Elem> gens;
  std::vector<Elem> parent{0};
  std::vector<std::size_t> gen_index{0};
  std::string name = "1";
  std::uint64_t fingerprint = 0;
  bool abelian = true;
};

namespace {

std::uint64_t fnv1a(const std::vector<Elem>& data, std::size_t n) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(n);
  for (Elem e : data) mix(e);
  return h;
}

// Shared builder. `validate` controls the O(n^3) associativity check.
std::shared_ptr<FiniteGroup::Impl> build_impl(const std::vector<std::vector<Elem>>& table,
                                               const std::vector<Elem>& gens, std::string name,
                                               std::vector<Elem>* old_index, bool validate);

}  // namespace

FiniteGroup::FiniteGroup() : impl_(std::make_shared<Impl>()) {}

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<Elem>>& table, const std::vector<Elem>& generators,
                                    std::string name) {
  return from_table(table, generators, std::move(name), nullptr);
}

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<Elem>>& table, const std::vector<Elem>& generators,
                                    std::string name, std::vector<Elem>* old_index) {
  return FiniteGroup(build_impl(table, generators, std::move(name), old_index, true));
}

FiniteGroup FiniteGroup::from_trusted_table(const std::vector<std::vector<Elem>>& table,
                                            const std::vector<Elem>& generators, std::string name,
                                            std::vector<Elem>* old_index) {
  return FiniteGroup(build_impl(table, generators, std::move(name), old_index, false));
}

std::size_t FiniteGroup::size() const noexcept { return impl_->n; }
Elem FiniteGroup::mul(Elem a, Elem b) const noexcept { return impl_->table[a * impl_->n + b]; }
Elem FiniteGroup::inv(Elem a) const noexcept { return impl_->inverse[a]; }
const std::vector<Elem>& FiniteGroup::generators() const noexcept { return impl_->gens; }
const std::string& FiniteGroup::name() const noexcept { return impl_->name; }
Elem FiniteGroup::tree_parent(Elem e) const noexcept { return impl_->parent[e]; }
std::size_t FiniteGroup::tree_generator(Elem e) const noexcept { return impl_->gen_index[e]; }
bool FiniteGroup::is_abelian() const noexcept { return impl_->abelian; }
std::uint64_t FiniteGroup::fingerprint() const noexcept { return impl_->fingerprint; }

FiniteGroup FiniteGroup::renamed(std::string name) const {
  auto copy = std::make_shared<Impl>(*impl_);
  copy->name = std::move(name);
  return FiniteGroup(std::move(copy));
}

bool FiniteGroup::same_as(const FiniteGroup& other) const noexcept {
  if (impl_ == other.impl_) return true;
  return impl_->n == other.impl_->n && impl_->fingerprint == other.impl_->fingerprint &&
         impl_->table == other.impl_->table;
}

Elem FiniteGroup::pow(Elem a, std::int64_t e) const noexcept {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  Elem r = identity();
  for (std::int64_t i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

std::size_t FiniteGroup::order_of(Elem a) const noexcept {
  std::size_t k = 1;
  for (Elem x = a; x != identity(); x = mul(x, a)) ++k;
  return k;
}

namespace {

std::shared_ptr<FiniteGroup::Impl> build_impl(const std::vector<std::vector<Elem>>& table,
                                               const std::vector<Elem>& gens, std::string name,
                                               std::vector<Elem>* old_index, bool validate) {
  const std::size_t n = table.size();
  require(n >= 1, Errc::InvalidInput, "group table is empty");
  for (const auto& row : table) {
    require(row.size() == n, Errc::InvalidInput, "group table is not square");
    for (Elem x : row) require(x < n, Errc::InvalidInput, "group table entry out of range");
  }
  for (Elem g : gens) require(g < n, Errc::InvalidInput, "generator index out of range");

  std::size_t id = n;
  for (std::size_t e = 0; e < n && id == n; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) id = e;
  }
  require(id != n, Errc::InvalidInput, "group table has no identity");

  if (validate) {
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<bool> seen(n, false);
      for (std::size_t b = 0; b < n; ++b) {
        require(!seen[table[a][b]], Errc::InvalidInput, "group table row is not a permutation");
        seen[table[a][b]] = true;
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Elem ab = table[a][b];
        for (std::size_t c = 0; c < n; ++c)
          require(table[ab][c] == table[a][table[b][c]], Errc::InvalidInput, "group table is not associative");
      }
  }

  // Breadth-first canonical order.
  std::vector<Elem> new_of(n, static_cast<Elem>(n));
  std::vector<Elem> order;
  std::vector<Elem> parent_old;
  std::vector<std::size_t> gen_of;
  order.reserve(n);
  new_of[id] = 0;
  order.push_back(static_cast<Elem>(id));
  parent_old.push_back(static_cast<Elem>(id));
  gen_of.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Elem x = order[head];
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Elem y = table[x][gens[s]];
      if (new_of[y] != n) continue;
      new_of[y] = static_cast<Elem>(order.size());
      order.push_back(y);
      parent_old.push_back(x);
      gen_of.push_back(s);
    }
  }
  require(order.size() == n, Errc::InvalidInput, "generators do not generate the group");

  auto impl = std::make_shared<FiniteGroup::Impl>();
  impl->n = n;
  impl->table.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) impl->table[a * n + b] = new_of[table[order[a]][order[b]]];
  impl->inverse.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (impl->table[a * n + b] == 0) {
        impl->inverse[a] = static_cast<Elem>(b);
        break;
      }
  for (Elem g : gens) impl->gens.push_back(new_of[g]);
  impl->parent.resize(n);
  impl->gen_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    impl->parent[i] = new_of[parent_old[i]];
    impl->gen_index[i] = gen_of[i];
  }
  impl->abelian = true;
  for (std::size_t a = 0; a < n && impl->abelian; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (impl->table[a * n + b] != impl->table[b * n + a]) {
        impl->abelian = false;
        break;
      }
  impl->name = name.empty() ? "G" + std::to_string(n) : std::move(name);
  impl->fingerprint = fnv1a(impl->table, n);
  if (old_index) *old_index = order;
  return impl;
}

}  // namespace


// --- Subgroup ---------------------------------------------------------------

Subgroup::Subgroup(FiniteGroup parent, std::vector<Elem> members) : parent_(std::move(parent)) {
  member_.assign(parent_.size(), false);
  for (Elem e : members) {
    require(e < parent_.size(), Errc::InvalidInput, "subgroup element out of range");
    member_[e] = true;
  }
  for (Elem e = 0; e < parent_.size(); ++e)
    if (member_[e]) elements_.push_back(e);
}

// --- GroupHom ---------------------------------------------------------------

GroupHom::GroupHom(FiniteGroup source, FiniteGroup target, std::vector<Elem> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  require(image_.size() == source_.size(), Errc::InvalidInput, "image vector has wrong length");
}

namespace {

// Extends generator images along the spanning tree; returns false if the
// result is not a homomorphism.
bool extend_images(const FiniteGroup& g, const FiniteGroup& h, const std::vector<Elem>& gimg,
                   std::vector<Elem>& out) {
  const std::size_t n = g.size();
  out.assign(n, 0);
  for (Elem e = 1; e < n; ++e) out[e] = h.mul(out[g.tree_parent(e)], gimg[g.tree_generator(e)]);
  const auto& gens = g.generators();
  for (Elem x = 0; x < n; ++x)
    for (std::size_t s = 0; s < gens.size(); ++s)
      if (out[g.mul(x, gens[s])] != h.mul(out[x], gimg[s])) return false;
  return true;
}

}  // namespace

std::optional<GroupHom> GroupHom::try_from_generator_images(const FiniteGroup& source, const FiniteGroup& target,
                                                            const std::vector<Elem>& images) {
  require(images.size() == source.generators().size(), Errc::InvalidInput,
          "number of generator images does not match the generating set");
  for (Elem e : images) require(e < target.size(), Errc::InvalidInput, "generator image out of range");
  std::vector<Elem> out;
  if (!extend_images(source, target, images, out)) return std::nullopt;
  return GroupHom(source, target, std::move(out));
}

GroupHom GroupHom::from_generator_images(const FiniteGroup& source, const FiniteGroup& target,
                                         const std::vector<Elem>& images) {
  auto h = try_from_generator_images(source, target, images);
  require(h.has_value(), Errc::InvalidInput, "generator images do not define a homomorphism");
  return *h;
}

GroupHom GroupHom::identity(const FiniteGroup& g) {
  std::vector<Elem> img(g.size());
  std::iota(img.begin(), img.end(), 0);
  return GroupHom(g, g, std::move(img));
}

GroupHom GroupHom::trivial(const FiniteGroup& source, const FiniteGroup& target) {
  return GroupHom(source, target, std::vector<Elem>(source.size(), 0));
}

std::vector<Elem> GroupHom::generator_images() const {
  std::vector<Elem> out;
  for (Elem s : source_.generators()) out.push_back(image_[s]);
  return out;
}

GroupHom GroupHom::after(const GroupHom& first) const {
  require(first.target().same_as(source_), Errc::InvalidInput, "composition of incompatible homomorphisms");
  std::vector<Elem> img(first.source().size());
  for (Elem x = 0; x < img.size(); ++x) img[x] = image_[first(x)];
  return GroupHom(first.source(), target_, std::move(img));
}

GroupHom GroupHom::conjugated(Elem by) const {
  std::vector<Elem> img(image_.size());
  for (Elem x = 0; x < img.size(); ++x) img[x] = target_.conj(image_[x], by);
  return GroupHom(source_, target_, std::move(img));
}

bool GroupHom::is_homomorphism() const {
  const std::size_t n = source_.size();
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (image_[source_.mul(a, b)] != target_.mul(image_[a], image_[b])) return false;
  return true;
}

bool GroupHom::is_injective() const { return kernel().size() == 1; }

bool GroupHom::is_surjective() const { return image().size() == target_.size(); }

Subgroup GroupHom::kernel() const {
  std::vector<Elem> k;
  for (Elem x = 0; x < image_.size(); ++x)
    if (image_[x] == target_.identity()) k.push_back(x);
  return Subgroup(source_, std::move(k));
}

Subgroup GroupHom::image() const { return Subgroup(target_, image_); }

// --- subgroups --------------------------------------------------------------

Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup(g, {g.identity()}); }

Subgroup whole_group(const FiniteGroup& g) {
  std::vector<Elem> all(g.size());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup(g, std::move(all));
}

Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<Elem>& gens) {
  std::vector<bool> seen(g.size(), false);
  std::vector<Elem> queue{g.identity()};
  seen[g.identity()] = true;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Elem s : gens) {
      const Elem y = g.mul(queue[head], s);
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  return Subgroup(g, std::move(queue));
}

bool is_normal(const Subgroup& h) {
  const FiniteGroup& g = h.parent();
  for (Elem s : g.generators())
    for (Elem x : h.elements())
      if (!h.contains(g.conj(x, s))) return false;
  return true;
}

Subgroup normal_closure(const FiniteGroup& g, const std::vector<Elem>& gens) {
  std::vector<Elem> current = gens;
  for (;;) {
    Subgroup h = generated_subgroup(g, current);
    if (is_normal(h)) return h;
    std::vector<Elem> next = h.elements();
    for (Elem x : h.elements())
      for (Elem s : g.generators()) next.push_back(g.conj(x, s));
    current = std::move(next);
  }
}

Subgroup center(const FiniteGroup& g) {
  std::vector<Elem> z;
  for (Elem x = 0; x < g.size(); ++x) {
    bool central = true;
    for (Elem s : g.generators())
      if (g.mul(x, s) != g.mul(s, x)) {
        central = false;
        break;
      }
    if (central) z.push_back(x);
  }
  return Subgroup(g, std::move(z));
}

Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& h, const Subgroup& k) {
  std::vector<bool> seen(g.size(), false);
  std::vector<Elem> gens;
  for (Elem a : h.elements())
    for (Elem b : k.elements()) {
      const Elem c = g.commutator(a, b);
      if (!seen[c]) {
        seen[c] = true;
        gens.push_back(c);
      }
    }
  return generated_subgroup(g, gens);
}

std::vector<Subgroup> lower_central_series(const FiniteGroup& g, const Subgroup& n, std::size_t depth) {
  require(n.parent().same_as(g), Errc::InvalidInput, "subgroup of a different group");
  require(is_normal(n), Errc::NotNormal, "subgroup is not normal");
  std::vector<Subgroup> out;
  if (depth == 0) return out;
  out.push_back(n);
  while (out.size() < depth) out.push_back(commutator_subgroup(g, n, out.back()));
  return out;
}

// --- homomorphism search ----------------------------------------------------

std::vector<GroupHom> enumerate_homs_restricted(const FiniteGroup& g, const FiniteGroup& h,
                                                const std::vector<std::vector<Elem>>& candidates,
                                                SearchBudget budget) {
  const std::size_t ngens = g.generators().size();
  require(candidates.size() == ngens, Errc::InvalidInput, "one candidate list per generator expected");
  // Filter by element order first; the remaining product is the search size.
  std::vector<std::vector<Elem>> cand(ngens);
  long double total = 1;
  for (std::size_t i = 0; i < ngens; ++i) {
    const std::size_t ord = g.order_of(g.generators()[i]);
    for (Elem c : candidates[i])
      if (ord % h.order_of(c) == 0) cand[i].push_back(c);
    std::sort(cand[i].begin(), cand[i].end());
    cand[i].erase(std::unique(cand[i].begin(), cand[i].end()), cand[i].end());
    total *= static_cast<long double>(cand[i].size());
  }
  if (total > static_cast<long double>(budget.max_assignments))
    fail(Errc::SearchBudgetExceeded, "homomorphism search exceeds the assignment budget");

  std::vector<GroupHom> out;
  std::vector<std::size_t> idx(ngens, 0);
  std::vector<Elem> img(ngens);
  std::vector<Elem> full;
  for (const auto& c : cand)
    if (c.empty()) return out;
  for (;;) {
    for (std::size_t i = 0; i < ngens; ++i) img[i] = cand[i][idx[i]];
    if (extend_images(g, h, img, full)) out.emplace_back(g, h, full);
    std::size_t pos = ngens;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < cand[pos].size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (ngens == 0) return out;
  }
}

std::vector<GroupHom> enumerate_homs(const FiniteGroup& g, const FiniteGroup& h, SearchBudget budget) {
  std::vector<Elem> all(h.size());
  std::iota(all.begin(), all.end(), 0);
  return enumerate_homs_restricted(g, h, std::vector<std::vector<Elem>>(g.generators().size(), all), budget);
}

std::vector<ConjugacyClassOfHoms> homs_mod_conjugacy(const std::vector<GroupHom>& homs, const Subgroup& by) {
  std::vector<ConjugacyClassOfHoms> out;
  if (homs.empty()) return out;
  const FiniteGroup& src = homs.front().source();
  const FiniteGroup& tgt = homs.front().target();
  for (const auto& f : homs)
    require(f.source().same_as(src) && f.target().same_as(tgt), Errc::MixedTargets,
            "homomorphisms have different sources or targets");
  require(by.parent().same_as(tgt), Errc::MixedTargets, "conjugating subgroup does not live in the target");

  std::map<std::vector<Elem>, std::size_t> index;
  for (std::size_t i = 0; i < homs.size(); ++i) index.emplace(homs[i].images(), i);
  std::vector<bool> done(homs.size(), false);
  // Classes are listed by their least member.
  std::vector<std::size_t> order(homs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return homs[a] < homs[b]; });
  for (std::size_t i : order) {
    if (done[i]) continue;
    ConjugacyClassOfHoms cls;
    for (Elem x : by.elements()) {
      auto it = index.find(homs[i].conjugated(x).images());
      if (it != index.end() && !done[it->second]) {
        done[it->second] = true;
        cls.members.push_back(it->second);
      }
    }
    std::sort(cls.members.begin(), cls.members.end());
    std::size_t best = cls.members.front();
    for (std::size_t m : cls.members)
      if (homs[m] < homs[best]) best = m;
    cls.representative = homs[best];
    out.push_back(std::move(cls));
  }
  return out;
}

std::optional<GroupHom> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h, SearchBudget budget) {
  if (g.size() != h.size() || g.is_abelian() != h.is_abelian()) return std::nullopt;
  // Cheap invariant: element order histogram.
  std::map<std::size_t, std::size_t> og, oh;
  for (Elem x = 0; x < g.size(); ++x) ++og[g.order_of(x)];
  for (Elem x = 0; x < h.size(); ++x) ++oh[h.order_of(x)];
  if (og != oh) return std::nullopt;
  std::vector<std::vector<Elem>> cand(g.generators().size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const std::size_t ord = g.order_of(g.generators()[i]);
    for (Elem y = 0; y < h.size(); ++y)
      if (h.order_of(y) == ord) cand[i].push_back(y);
  }
  for (auto& f : enumerate_homs_restricted(g, h, cand, budget))
    if (f.is_injective()) return f;
  return std::nullopt;
}

// --- constructions ----------------------------------------------------------

QuotientGroup quotient(const FiniteGroup& g, const Subgroup& n) {
  require(n.parent().same_as(g), Errc::InvalidInput, "subgroup of a different group");
  require(is_normal(n), Errc::NotNormal, "subgroup is not normal");
  const std::size_t sz = g.size();
  std::vector<Elem> coset(sz, static_cast<Elem>(sz));
  std::vector<Elem> reps;
  for (Elem x = 0; x < sz; ++x) {
    if (coset[x] != sz) continue;
    const Elem id = static_cast<Elem>(reps.size());
    reps.push_back(x);
    for (Elem k : n.elements()) coset[g.mul(x, k)] = id;
  }
  const std::size_t m = reps.size();
  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a][b] = coset[g.mul(reps[a], reps[b])];
  std::vector<Elem> gens;
  for (Elem s : g.generators()) gens.push_back(coset[s]);
  std::vector<Elem> old;
  FiniteGroup q = FiniteGroup::from_trusted_table(table, gens, g.name() + "/N", &old);
  std::vector<Elem> new_of(m);
  for (std::size_t i = 0; i < m; ++i) new_of[old[i]] = static_cast<Elem>(i);
  std::vector<Elem> proj(sz);
  for (Elem x = 0; x < sz; ++x) proj[x] = new_of[coset[x]];
  std::vector<Elem> rep(m);
  for (std::size_t i = 0; i < m; ++i) rep[i] = reps[old[i]];
  return QuotientGroup{q, GroupHom(g, q, std::move(proj)), std::move(rep)};
}

ProductGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t a = g.size(), b = h.size();
  require(a * b <= 4096, Errc::InvalidInput, "direct product too large");
  std::vector<std::vector<Elem>> table(a * b, std::vector<Elem>(a * b));
  for (std::size_t x = 0; x < a * b; ++x)
    for (std::size_t y = 0; y < a * b; ++y)
      table[x][y] = static_cast<Elem>(g.mul(x / b, y / b) * b + h.mul(x % b, y % b));
  std::vector<Elem> gens;
  for (Elem s : g.generators()) gens.push_back(static_cast<Elem>(s * b));
  for (Elem t : h.generators()) gens.push_back(t);
  std::vector<Elem> old;
  FiniteGroup p = FiniteGroup::from_trusted_table(table, gens, g.name() + "x" + h.name(), &old);
  std::vector<Elem> new_of(a * b);
  for (std::size_t i = 0; i < a * b; ++i) new_of[old[i]] = static_cast<Elem>(i);
  ProductGroup out;
  out.group = p;
  out.components.resize(a * b);
  std::vector<Elem> p1(a * b), p2(a * b), i1(a), i2(b);
  for (std::size_t i = 0; i < a * b; ++i) {
    out.components[i] = {old[i] / static_cast<Elem>(b), old[i] % static_cast<Elem>(b)};
    p1[i] = out.components[i].first;
    p2[i] = out.components[i].second;
  }
  for (std::size_t x = 0; x < a; ++x) i1[x] = new_of[x * b];
  for (std::size_t y = 0; y < b; ++y) i2[y] = new_of[y];
  out.first_projection = GroupHom(p, g, std::move(p1));
  out.second_projection = GroupHom(p, h, std::move(p2));
  out.first_inclusion = GroupHom(g, p, std::move(i1));
  out.second_inclusion = GroupHom(h, p, std::move(i2));
  return out;
}

SubgroupAsGroup subgroup_as_group(const Subgroup& h, std::string name) {
  const FiniteGroup& g = h.parent();
  const auto& el = h.elements();
  const std::size_t m = el.size();
  std::vector<Elem> local(g.size(), 0);
  for (std::size_t i = 0; i < m; ++i) local[el[i]] = static_cast<Elem>(i);
  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) table[a][b] = local[g.mul(el[a], el[b])];
  // Greedy generating set in parent order.
  std::vector<Elem> gens_parent;
  std::size_t spanned = 1;
  for (Elem x : el) {
    if (spanned == m) break;
    Subgroup cur = generated_subgroup(g, gens_parent);
    if (cur.contains(x)) continue;
    gens_parent.push_back(x);
    spanned = generated_subgroup(g, gens_parent).size();
  }
  std::vector<Elem> gens;
  for (Elem x : gens_parent) gens.push_back(local[x]);
  std::vector<Elem> old;
  if (name.empty()) name = "H" + std::to_string(m);
  FiniteGroup sub = FiniteGroup::from_trusted_table(table, gens, std::move(name), &old);
  std::vector<Elem> inc(m);
  for (std::size_t i = 0; i < m; ++i) inc[i] = el[old[i]];
  return SubgroupAsGroup{sub, GroupHom(sub, g, std::move(inc))};
}

// --- catalog ----------------------------------------------------------------

namespace catalog {

FiniteGroup trivial() { return FiniteGroup(); }

FiniteGroup cyclic(std::size_t n) {
  require(n >= 1, Errc::InvalidInput, "cyclic group order must be positive");
  if (n == 1) return FiniteGroup();
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Elem>((a + b) % n);
  return FiniteGroup::from_trusted_table(t, {1}, "C" + std::to_string(n));
}

FiniteGroup dihedral(std::size_t n) {
  require(n >= 1, Errc::InvalidInput, "dihedral parameter must be positive");
  // r^i s^j encoded as 2i+j; s r = r^{-1} s.
  const std::size_t m = 2 * n;
  std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      const std::size_t i1 = x / 2, j1 = x % 2, i2 = y / 2, j2 = y % 2;
      const std::size_t i = j1 ? (i1 + n - i2) % n : (i1 + i2) % n;
      t[x][y] = static_cast<Elem>(2 * i + ((j1 + j2) % 2));
    }
  std::vector<Elem> gens;
  if (n > 1) gens.push_back(2);
  gens.push_back(1);
  return FiniteGroup::from_trusted_table(t, gens, "D" + std::to_string(n));
}

FiniteGroup permutation_group(std::size_t degree, const std::vector<std::vector<std::uint32_t>>& gens,
                              std::string name) {
  using Perm = std::vector<std::uint32_t>;
  for (const auto& p : gens) {
    require(p.size() == degree, Errc::InvalidInput, "permutation has wrong degree");
    std::vector<bool> seen(degree, false);
    for (auto x : p) {
      require(x < degree && !seen[x], Errc::InvalidInput, "not a permutation");
      seen[x] = true;
    }
  }
  // Product a*b: apply a, then b.
  auto compose = [&](const Perm& a, const Perm& b) {
    Perm c(degree);
    for (std::size_t x = 0; x < degree; ++x) c[x] = b[a[x]];
    return c;
  };
  Perm id(degree);
  std::iota(id.begin(), id.end(), 0);
  std::map<Perm, Elem> index{{id, 0}};
  std::vector<Perm> elems{id};
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& s : gens) {
      Perm y = compose(elems[head], s);
      if (index.emplace(y, static_cast<Elem>(elems.size())).second) {
        elems.push_back(std::move(y));
        require(elems.size() <= 4096, Errc::InvalidInput, "permutation group too large");
      }
    }
  const std::size_t n = elems.size();
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
  std::vector<Elem> g;
  for (const auto& s : gens) g.push_back(index.at(s));
  return FiniteGroup::from_trusted_table(t, g, std::move(name));
}

FiniteGroup symmetric(std::size_t n) {
  require(n >= 1 && n <= 5, Errc::InvalidInput, "symmetric group degree must be in 1..5");
  if (n == 1) return FiniteGroup().renamed("S1");
  std::vector<std::uint32_t> swap(n), cycle(n);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
  if (n == 2) return permutation_group(n, {swap}, "S2");
  return permutation_group(n, {swap, cycle}, "S" + std::to_string(n));
}

FiniteGroup alternating(std::size_t n) {
  require(n >= 1 && n <= 5, Errc::InvalidInput, "alternating group degree must be in 1..5");
  if (n <= 2) return FiniteGroup().renamed("A" + std::to_string(n));
  std::vector<std::vector<std::uint32_t>> gens;
  for (std::size_t i = 2; i < n; ++i) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    p[0] = 1;
    p[1] = static_cast<std::uint32_t>(i);
    p[i] = 0;
    gens.push_back(p);
  }
  return permutation_group(n, gens, "A" + std::to_string(n));
}

FiniteGroup quaternion8() {
  // (sign, unit) with unit in {1,i,j,k}; encoded sign*4+unit.
  static const int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  std::vector<std::vector<Elem>> t(8, std::vector<Elem>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int sx = x / 4, ux = x % 4, sy = y / 4, uy = y % 4;
      const int s = (sx + sy + unit_sign[ux][uy]) % 2;
      t[x][y] = static_cast<Elem>(s * 4 + unit_mul[ux][uy]);
    }
  return FiniteGroup::from_table(t, {1, 2}, "Q8");
}

FiniteGroup abelian(const std::vector<std::int64_t>& factors) {
  std::size_t n = 1;
  for (auto d : factors) {
    require(d >= 1, Errc::InvalidInput, "cyclic factor must be positive");
    n *= static_cast<std::size_t>(d);
    require(n <= 4096, Errc::InvalidInput, "abelian group too large");
  }
  std::vector<std::int64_t> f;
  for (auto d : factors)
    if (d > 1) f.push_back(d);
  if (f.empty()) return FiniteGroup();
  // Mixed radix encoding, first factor most significant.
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  auto decode = [&](std::size_t x) {
    std::vector<std::int64_t> c(f.size());
    for (std::size_t i = f.size(); i-- > 0;) {
      c[i] = static_cast<std::int64_t>(x % f[i]);
      x /= f[i];
    }
    return c;
  };
  auto encode = [&](const std::vector<std::int64_t>& c) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < f.size(); ++i) x = x * f[i] + static_cast<std::size_t>(c[i]);
    return static_cast<Elem>(x);
  };
  for (std::size_t a = 0; a < n; ++a) {
    auto ca = decode(a);
    for (std::size_t b = 0; b < n; ++b) {
      auto cb = decode(b);
      for (std::size_t i = 0; i < f.size(); ++i) cb[i] = (ca[i] + cb[i]) % f[i];
      t[a][b] = encode(cb);
    }
  }
  std::vector<Elem> gens;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::int64_t> e(f.size(), 0);
    e[i] = 1;
    gens.push_back(encode(e));
  }
  std::string name;
  for (std::size_t i = 0; i < f.size(); ++i) name += (i ? "xC" : "C") + std::to_string(f[i]);
  return FiniteGroup::from_trusted_table(t, gens, name);
}

FiniteGroup klein4() { return abelian({2, 2}).renamed("V4"); }

FiniteGroup by_name(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '_') s += c;
  auto number = [&](std::size_t from) -> std::size_t {
    require(from < s.size(), Errc::InvalidInput, "unknown group name: " + raw);
    for (std::size_t i = from; i < s.size(); ++i)
      require(std::isdigit(static_cast<unsigned char>(s[i])) != 0, Errc::InvalidInput, "unknown group name: " + raw);
    return std::stoul(s.substr(from));
  };
  if (s == "1" || s == "trivial" || s == "C1" || s == "Z1") return trivial();
  if (s == "Q8") return quaternion8();
  if (s == "V4" || s == "K4") return klein4();
  if (s.find('x') != std::string::npos) {
    std::vector<std::int64_t> f;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, 'x')) {
      require(part.size() >= 2 && (part[0] == 'C' || part[0] == 'Z'), Errc::InvalidInput,
              "unknown group name: " + raw);
      f.push_back(static_cast<std::int64_t>(std::stoul(part.substr(1))));
    }
    return abelian(f).renamed(raw);
  }
  if (s[0] == 'C' || s[0] == 'Z') return cyclic(number(1)).renamed(s);
  if (s[0] == 'D') return dihedral(number(1));
  if (s[0] == 'S') return symmetric(number(1));
  if (s[0] == 'A') return alternating(number(1));
  fail(Errc::InvalidInput, "unknown group name: " + raw);
}

}  // namespace catalog

std::vector<std::size_t> canonical_word(const FiniteGroup& g, Elem e) {
  std::vector<std::size_t> w;
  while (e != g.identity()) {
    w.push_back(g.tree_generator(e));
    e = g.tree_parent(e);
  }
  std::reverse(w.begin(), w.end());
  return w;
}

}  // namespace obstower
