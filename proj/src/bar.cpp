#include "malcev/bar.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace malcev {

namespace {

int koszul(int degree) { return degree % 2 ? -1 : 1; }

}  // namespace

// ---------------------------------------------------------------------------
// DGAModel

DGAModel::DGAModel(std::vector<std::string> labels, std::vector<int> degrees, std::size_t unit,
                   std::vector<SparseVec> differential,
                   const std::map<std::pair<std::size_t, std::size_t>, SparseVec>& products)
    : labels_(std::move(labels)), degrees_(std::move(degrees)), unit_(unit), d_(std::move(differential)) {
  const std::size_t n = labels_.size();
  if (degrees_.size() != n || d_.size() != n) throw std::invalid_argument("model arrays have inconsistent sizes");
  if (unit_ >= n) throw std::invalid_argument("unit index out of range");
  std::set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate basis label '" + l + "'");
  for (int deg : degrees_)
    if (deg < 0) throw std::invalid_argument("negative degree in model");
  auto check_vec = [n](const SparseVec& v) {
    for (const auto& [i, c] : v)
      if (i >= n) throw std::out_of_range("model structure constant refers to unknown basis element");
  };
  for (const auto& v : d_) check_vec(v);
  product_.assign(n * n, SparseVec{});
  std::vector<bool> given(n * n, false);
  for (const auto& [key, v] : products) {
    auto [i, j] = key;
    if (i >= n || j >= n) throw std::out_of_range("product index out of range");
    check_vec(v);
    product_[i * n + j] = v;
    given[i * n + j] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (given[i * n + j]) continue;
      if (i == unit_) {
        product_[i * n + j] = {{j, Rational(1)}};
      } else if (j == unit_) {
        product_[i * n + j] = {{i, Rational(1)}};
      } else if (given[j * n + i]) {
        product_[i * n + j] = scaled(product_[j * n + i], koszul(degrees_[i] * degrees_[j]));
      }
    }
}

int DGAModel::max_degree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

std::optional<std::size_t> DGAModel::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

std::vector<std::size_t> DGAModel::basis_in_degree(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim(); ++i)
    if (degrees_[i] == k) out.push_back(i);
  return out;
}

SparseVec DGAModel::d(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [i, c] : x) axpy(out, c, d_[i]);
  return out;
}

SparseVec DGAModel::multiply(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) axpy(out, a * b, product(i, j));
  return out;
}

void DGAModel::set_action(std::shared_ptr<const FiniteGroup> group, std::vector<std::vector<SparseVec>> images) {
  if (!group) throw std::invalid_argument("action needs a group");
  if (images.size() != group->order()) throw std::invalid_argument("action needs one map per group element");
  for (const auto& m : images) {
    if (m.size() != dim()) throw std::invalid_argument("action map has wrong size");
    for (const auto& v : m)
      for (const auto& [i, c] : v)
        if (i >= dim()) throw std::out_of_range("action refers to unknown basis element");
  }
  group_ = std::move(group);
  action_ = std::move(images);
}

SparseVec DGAModel::act(const SparseVec& x, std::size_t g) const {
  SparseVec out;
  for (const auto& [i, c] : x) axpy(out, c, action_[g][i]);
  return out;
}

DGAModel::Report DGAModel::validate() const {
  Report r;
  auto fail = [&r](std::string msg) {
    r.ok = false;
    if (r.violations.size() < 25) r.violations.push_back(std::move(msg));
  };
  const std::size_t n = dim();
  auto in_degree = [this](const SparseVec& v, int k) {
    return std::all_of(v.begin(), v.end(), [&](const auto& t) { return degrees_[t.first] == k; });
  };
  auto basis = [](std::size_t i) { return SparseVec{{i, Rational(1)}}; };

  if (degrees_[unit_] != 0) fail("unit is not in degree 0");
  if (basis_in_degree(0).size() != 1) fail("model is not connected: degree 0 is not spanned by the unit");
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_degree(d_[i], degrees_[i] + 1)) fail("d(" + labels_[i] + ") does not have degree " + std::to_string(degrees_[i] + 1));
    if (!d(d_[i]).empty()) fail("d^2(" + labels_[i] + ") != 0");
  }
  if (!d_[unit_].empty()) fail("d(unit) != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& ab = product(i, j);
      const std::string pair = "(" + labels_[i] + "," + labels_[j] + ")";
      if (!in_degree(ab, degrees_[i] + degrees_[j])) fail("product " + pair + " leaves its degree");
      if (ab != scaled(product(j, i), koszul(degrees_[i] * degrees_[j]))) fail("graded commutativity fails at " + pair);
      SparseVec lhs = d(ab);
      SparseVec rhs = multiply(d_[i], basis(j));
      axpy(rhs, koszul(degrees_[i]), multiply(basis(i), d_[j]));
      if (lhs != rhs) fail("Leibniz rule fails at " + pair);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (degrees_[i] + degrees_[j] + degrees_[k] > max_degree()) continue;
        if (multiply(product(i, j), basis(k)) != multiply(basis(i), product(j, k)))
          fail("associativity fails at (" + labels_[i] + "," + labels_[j] + "," + labels_[k] + ")");
      }
  if (group_) {
    const auto& G = *group_;
    for (std::size_t g = 0; g < G.order(); ++g) {
      const std::string gl = " under " + G.label(g);
      for (std::size_t i = 0; i < n; ++i) {
        const auto& img = action_[g][i];
        if (!in_degree(img, degrees_[i])) fail("action does not preserve the degree of " + labels_[i] + gl);
        if (g == G.identity() && img != basis(i)) fail("identity acts nontrivially on " + labels_[i]);
        if (act(d_[i], g) != d(img)) fail("action does not commute with d on " + labels_[i] + gl);
        for (std::size_t h = 0; h < G.order(); ++h)
          if (act(img, h) != action_[G.multiply(g, h)][i]) fail("action is not a right action on " + labels_[i]);
        for (std::size_t j = 0; j < n; ++j)
          if (act(product(i, j), g) != multiply(img, action_[g][j]))
            fail("action is not multiplicative on (" + labels_[i] + "," + labels_[j] + ")" + gl);
      }
    }
  }
  return r;
}

SubquotientCoordinates DGAModel::cohomology(int k) const {
  std::vector<SparseVec> boundaries, cocycles;
  for (auto i : basis_in_degree(k - 1)) boundaries.push_back(d_[i]);
  auto cols = basis_in_degree(k);
  std::vector<SparseVec> rows(dim());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [t, v] : d_[cols[c]]) rows[t].emplace(c, v);
  for (const auto& z : kernel_basis(RatMatrix::from_rows(cols.size(), rows))) {
    SparseVec full;
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (z[c] != 0) full.emplace(cols[c], z[c]);
    cocycles.push_back(std::move(full));
  }
  return SubquotientCoordinates(boundaries, cocycles);
}

std::vector<std::size_t> DGAModel::cohomology_dims() const {
  std::vector<std::size_t> out;
  for (int k = 0; k <= max_degree(); ++k) out.push_back(cohomology(k).dim());
  return out;
}

RatMatrix DGAModel::cohomology_action(int k, std::size_t g) const {
  if (!group_) throw std::logic_error("model has no group action");
  auto h = cohomology(k);
  RatMatrix m(h.dim(), h.dim());
  for (std::size_t j = 0; j < h.dim(); ++j)
    for (const auto& [i, c] : h.coordinates(act(h.representatives()[j], g))) m.set(i, j, c);
  return m;
}

// ---------------------------------------------------------------------------
// Bar elements

void add_term(BarElement& x, const BarWord& w, const Rational& c) {
  if (c == 0) return;
  auto it = x.find(w);
  if (it == x.end()) {
    x.emplace(w, c);
  } else {
    it->second += c;
    if (it->second == 0) x.erase(it);
  }
}

void axpy(BarElement& y, const Rational& a, const BarElement& x) {
  if (a == 0) return;
  for (const auto& [w, c] : x) add_term(y, w, a * c);
}

BarComplex::BarComplex(std::shared_ptr<const DGAModel> model, SideKind left, SideKind right)
    : model_(std::move(model)), left_(left), right_(right) {
  if (!model_) throw std::invalid_argument("bar complex needs a model");
  if ((left_ == SideKind::Coefficients || right_ == SideKind::Coefficients) && !model_->has_action())
    throw std::invalid_argument("O(S) coefficients need a model with a group action");
}

std::size_t BarComplex::side_dim(SideKind side) const {
  switch (side) {
    case SideKind::Ground: return 1;
    case SideKind::Algebra: return model_->dim();
    case SideKind::Coefficients: return model_->group().order();
  }
  return 0;
}

int BarComplex::side_degree(SideKind side, std::size_t i) const {
  return side == SideKind::Algebra ? model_->degree(i) : 0;
}

std::string BarComplex::side_label(SideKind side, std::size_t i) const {
  switch (side) {
    case SideKind::Ground: return "";
    case SideKind::Algebra: return model_->label(i);
    case SideKind::Coefficients: return "e_" + model_->group().label(i);
  }
  return "";
}

SparseVec BarComplex::side_d(SideKind side, std::size_t i) const {
  return side == SideKind::Algebra ? model_->d(i) : SparseVec{};
}

SparseVec BarComplex::left_act(std::size_t m, std::size_t a) const {
  if (left_ == SideKind::Algebra) return model_->product(m, a);
  auto e = model_->augmentation(a);
  return e == 0 ? SparseVec{} : SparseVec{{m, e}};
}

SparseVec BarComplex::right_act(std::size_t a, std::size_t n) const {
  if (right_ == SideKind::Algebra) return model_->product(a, n);
  auto e = model_->augmentation(a);
  return e == 0 ? SparseVec{} : SparseVec{{n, e}};
}

int BarComplex::total_degree(const BarWord& w) const {
  int t = side_degree(left_, w.left) + side_degree(right_, w.right);
  for (auto a : w.letters) t += model_->degree(a) - 1;
  return t;
}

std::string BarComplex::render(const BarWord& w) const {
  std::string s = side_label(left_, w.left) + "[";
  for (std::size_t i = 0; i < w.letters.size(); ++i) s += (i ? "|" : "") + model_->label(w.letters[i]);
  return s + "]" + side_label(right_, w.right);
}

std::string BarComplex::render(const BarElement& x) const {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : x) {
    std::string coeff = to_string(c);
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    if (c < 0) coeff = to_string(-c);
    if (coeff != "1") s += coeff + " ";
    s += render(w);
  }
  return s;
}

BarElement BarComplex::differential(const BarElement& x) const {
  const DGAModel& A = *model_;
  BarElement out;
  for (const auto& [w, c] : x) {
    const std::size_t r = w.letters.size();
    const int jm = koszul(side_degree(left_, w.left));
    int reduced = 0;
    for (auto a : w.letters) reduced += A.degree(a) - 1;

    for (const auto& [m, e] : side_d(left_, w.left)) add_term(out, {m, w.letters, w.right}, c * e);

    int prefix = 1;  // product of J(a_k) for k < i
    for (std::size_t i = 0; i < r; ++i) {
      const int sign = jm * (i % 2 ? 1 : -1) * prefix;  // (-1)^(i+1) with 0-based i
      for (const auto& [da, e] : A.d(w.letters[i])) {
        BarWord v = w;
        v.letters[i] = da;
        add_term(out, v, c * sign * e);
      }
      if (i + 1 < r) {
        const int msign = jm * (i % 2 ? -1 : 1) * prefix * koszul(A.degree(w.letters[i]));  // (-1)^(i+2)
        for (const auto& [ab, e] : A.product(w.letters[i], w.letters[i + 1])) {
          BarWord v;
          v.left = w.left;
          v.right = w.right;
          v.letters.assign(w.letters.begin(), w.letters.begin() + static_cast<long>(i));
          v.letters.push_back(ab);
          v.letters.insert(v.letters.end(), w.letters.begin() + static_cast<long>(i) + 2, w.letters.end());
          add_term(out, v, c * msign * e);
        }
      }
      prefix *= koszul(A.degree(w.letters[i]));
    }

    for (const auto& [n, e] : side_d(right_, w.right))
      add_term(out, {w.left, w.letters, n}, c * jm * koszul(reduced) * e);

    if (r >= 1) {
      int pre = 1;
      for (std::size_t k = 0; k + 1 < r; ++k) pre *= koszul(A.degree(w.letters[k]));
      const int sign = (r % 2 ? 1 : -1) * jm * pre;  // (-1)^(r+1)
      std::vector<std::size_t> head(w.letters.begin(), w.letters.end() - 1);
      for (const auto& [n, e] : right_act(w.letters.back(), w.right)) add_term(out, {w.left, head, n}, c * sign * e);
      std::vector<std::size_t> tail(w.letters.begin() + 1, w.letters.end());
      for (const auto& [m, e] : left_act(w.left, w.letters.front())) add_term(out, {m, tail, w.right}, -c * jm * e);
    }
  }
  return out;
}

BarElement BarComplex::shuffle(const BarElement& x, const BarElement& y) const {
  if (left_ == SideKind::Algebra || right_ == SideKind::Algebra)
    throw std::invalid_argument("shuffle product needs ground or O(S) ends");
  const DGAModel& A = *model_;
  BarElement out;
  for (const auto& [u, cu] : x) {
    for (const auto& [v, cv] : y) {
      // e_g e_h = delta_{gh} e_g; the ground field has a single basis element
      if (u.left != v.left || u.right != v.right) continue;
      const auto& a = u.letters;
      const auto& b = v.letters;
      BarWord w{u.left, {}, u.right};
      std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j, int sign) {
        if (i == a.size() && j == b.size()) {
          add_term(out, w, cu * cv * sign);
          return;
        }
        if (i < a.size()) {
          w.letters.push_back(a[i]);
          rec(i + 1, j, sign);
          w.letters.pop_back();
        }
        if (j < b.size()) {
          int s = sign;
          for (std::size_t k = i; k < a.size(); ++k) s *= koszul((A.degree(a[k]) - 1) * (A.degree(b[j]) - 1));
          w.letters.push_back(b[j]);
          rec(i, j + 1, s);
          w.letters.pop_back();
        }
      };
      rec(0, 0, 1);
    }
  }
  return out;
}

std::vector<BarWord> BarComplex::words(int total, std::size_t max_length) const {
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < model_->dim(); ++i)
    if (model_->degree(i) > 0) letters.push_back(i);
  std::vector<BarWord> out;
  for (std::size_t m = 0; m < side_dim(left_); ++m)
    for (std::size_t n = 0; n < side_dim(right_); ++n) {
      int budget = total - side_degree(left_, m) - side_degree(right_, n);
      if (budget < 0) continue;
      BarWord w{m, {}, n};
      std::function<void(int)> rec = [&](int left) {
        if (left == 0) out.push_back(w);
        if (w.letters.size() == max_length) return;
        for (auto a : letters) {
          int cost = model_->degree(a) - 1;
          if (cost > left) continue;
          w.letters.push_back(a);
          rec(left - cost);
          w.letters.pop_back();
        }
      };
      rec(budget);
    }
  std::sort(out.begin(), out.end());
  return out;
}

BarElement BarComplex::random_element(std::mt19937_64& rng, std::size_t max_length, std::size_t terms) const {
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < model_->dim(); ++i)
    if (model_->degree(i) > 0) letters.push_back(i);
  std::uniform_int_distribution<std::size_t> len(0, letters.empty() ? 0 : max_length);
  std::uniform_int_distribution<int> coeff(1, 5);
  std::bernoulli_distribution neg(0.5);
  BarElement x;
  for (std::size_t t = 0; t < terms; ++t) {
    BarWord w;
    w.left = std::uniform_int_distribution<std::size_t>(0, side_dim(left_) - 1)(rng);
    w.right = std::uniform_int_distribution<std::size_t>(0, side_dim(right_) - 1)(rng);
    std::size_t r = len(rng);
    for (std::size_t k = 0; k < r; ++k)
      w.letters.push_back(letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)]);
    int c = coeff(rng);
    add_term(x, w, neg(rng) ? -c : c);
  }
  return x;
}

// ---------------------------------------------------------------------------
// H^0

namespace {

struct Kernel {
  std::vector<BarWord> domain;  // longest words first
  EchelonBasis basis;           // pivots index into domain
};

Kernel degree_zero_kernel(const BarComplex& bar, std::size_t cap) {
  Kernel k;
  k.domain = bar.words(0, cap);
  std::stable_sort(k.domain.begin(), k.domain.end(),
                   [](const BarWord& a, const BarWord& b) { return a.letters.size() > b.letters.size(); });
  const std::size_t n = k.domain.size();
  std::vector<BarElement> images(n);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < n; ++j) images[j] = bar.differential(BarElement{{k.domain[j], Rational(1)}});
  std::map<BarWord, std::size_t> target;
  for (const auto& img : images)
    for (const auto& [w, c] : img) target.emplace(w, target.size());
  std::vector<SparseVec> rows(target.size());
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [w, c] : images[j]) rows[target.at(w)].emplace(j, c);
  for (const auto& z : kernel_basis(RatMatrix::from_rows(n, std::move(rows)))) k.basis.insert(to_sparse(z));
  return k;
}

}  // namespace

H0Result h0(const BarComplex& bar, std::size_t cap) {
  H0Result res;
  res.cap = cap;
  auto kernel = degree_zero_kernel(bar, cap);
  res.new_dims.assign(cap + 1, 0);
  for (const auto& [pivot, row] : kernel.basis.rows()) {
    BarElement x;
    for (const auto& [j, c] : row) x.emplace(kernel.domain[j], c);
    std::size_t s = kernel.domain[pivot].letters.size();
    res.basis.push_back(std::move(x));
    res.filtration.push_back(s);
    ++res.new_dims[s];
  }
  // present the basis by increasing bar degree
  std::vector<std::size_t> order(res.basis.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return res.filtration[a] < res.filtration[b]; });
  std::vector<BarElement> basis;
  std::vector<std::size_t> filtration;
  for (auto i : order) {
    basis.push_back(std::move(res.basis[i]));
    filtration.push_back(res.filtration[i]);
  }
  res.basis = std::move(basis);
  res.filtration = std::move(filtration);
  std::size_t acc = 0;
  for (auto d : res.new_dims) res.cumulative.push_back(acc += d);

  if (bar.right() == SideKind::Coefficients && bar.left() == SideKind::Ground) {
    BarComplex trivial(bar.model_ptr(), SideKind::Ground, SideKind::Ground);
    auto base = h0(trivial, cap);
    const std::size_t order_s = bar.model().group().order();
    bool ok = true;
    for (std::size_t s = 0; s <= cap; ++s) ok = ok && res.new_dims[s] == order_s * base.new_dims[s];
    std::map<BarWord, std::size_t> index;
    for (std::size_t j = 0; j < kernel.domain.size(); ++j) index.emplace(kernel.domain[j], j);
    for (const auto& x : base.basis)
      for (std::size_t g = 0; g < order_s && ok; ++g) {
        SparseVec v;
        for (const auto& [w, c] : x) v.emplace(index.at({w.left, w.letters, g}), c);
        ok = kernel.basis.contains(v);
      }
    res.tensor_decomposition = ok;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Eilenberg-Moore E1

std::vector<std::vector<std::size_t>> em_e1_dims(const BarComplex& bar, std::size_t max_s) {
  const DGAModel& A = *bar.model_ptr();
  auto h = A.cohomology_dims();
  std::vector<std::size_t> hplus = h;
  hplus[0] = 0;
  auto side = [&](SideKind k) -> std::vector<std::size_t> {
    switch (k) {
      case SideKind::Ground: return {1};
      case SideKind::Algebra: return h;
      case SideKind::Coefficients: return {A.group().order()};
    }
    return {};
  };
  auto conv = [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  std::vector<std::vector<std::size_t>> out;
  auto sides = conv(side(bar.left()), side(bar.right()));
  std::vector<std::size_t> power{1};
  for (std::size_t s = 0; s <= max_s; ++s) {
    out.push_back(conv(sides, power));
    power = conv(power, hplus);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coproduct

BarTensor coproduct_h0(const BarComplex& bar, const BarElement& x) {
  if (bar.left() != SideKind::Ground || bar.right() == SideKind::Algebra)
    throw std::invalid_argument("coproduct needs a ground left end and a ground or O(S) right end");
  const DGAModel& A = bar.model();
  BarTensor out;
  auto add = [&out](const BarWord& a, const BarWord& b, const Rational& c) {
    if (c == 0) return;
    auto& slot = out[{a, b}];
    slot += c;
    if (slot == 0) out.erase({a, b});
  };
  for (const auto& [w, c] : x) {
    const std::size_t r = w.letters.size();
    for (std::size_t i = 0; i <= r; ++i) {
      std::vector<std::size_t> head(w.letters.begin(), w.letters.begin() + static_cast<long>(i));
      std::vector<std::size_t> tail(w.letters.begin() + static_cast<long>(i), w.letters.end());
      if (bar.right() == SideKind::Ground) {
        add({0, head, 0}, {0, tail, 0}, c);
        continue;
      }
      const auto& G = A.group();
      for (std::size_t h = 0; h < G.order(); ++h) {
        std::size_t k = G.multiply(G.inverse(h), w.right);  // h k = c
        // expand [w_{i+1}.h | ... | w_r.h] multilinearly
        std::vector<std::pair<std::vector<std::size_t>, Rational>> acted{{{}, Rational(1)}};
        for (auto a : tail) {
          std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
          for (const auto& [pre, pc] : acted)
            for (const auto& [b, bc] : A.act(a, h)) {
              auto word = pre;
              word.push_back(b);
              next.emplace_back(std::move(word), pc * bc);
            }
          acted = std::move(next);
        }
        for (const auto& [word, wc] : acted) add({0, head, h}, {0, word, k}, c * wc);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Indecomposables

Indecomposables indecomposables_and_cobracket(const BarComplex& bar, const H0Result& h) {
  if (bar.left() != SideKind::Ground || bar.right() != SideKind::Ground)
    throw std::invalid_argument("indecomposables need ground ends on both sides");
  const DGAModel& A = bar.model();
  Indecomposables out;
  out.cap = h.cap;

  std::map<std::vector<std::size_t>, std::size_t> word_index;
  std::vector<std::vector<std::size_t>> words;
  auto index = [&](const std::vector<std::size_t>& w) {
    auto [it, fresh] = word_index.emplace(w, words.size());
    if (fresh) words.push_back(w);
    return it->second;
  };
  auto to_vec = [&](const BarElement& x) {
    SparseVec v;
    for (const auto& [w, c] : x) v.emplace(index(w.letters), c);
    return v;
  };

  // symbols: top bar-degree parts of the filtration-adapted cocycles
  std::vector<std::vector<BarElement>> symbols(h.cap + 1);
  for (std::size_t i = 0; i < h.basis.size(); ++i) {
    std::size_t r = h.filtration[i];
    if (r == 0) continue;
    BarElement top;
    for (const auto& [w, c] : h.basis[i])
      if (w.letters.size() == r) top.emplace(w, c);
    symbols[r].push_back(std::move(top));
  }

  std::vector<SubquotientCoordinates> q(h.cap + 1);
  std::vector<std::size_t> offset(h.cap + 2, 0);
  for (std::size_t r = 1; r <= h.cap; ++r) {
    std::vector<SparseVec> decomposable, numerator;
    for (std::size_t i = 1; 2 * i <= r; ++i)
      for (const auto& s : symbols[i])
        for (const auto& t : symbols[r - i]) decomposable.push_back(to_vec(bar.shuffle(s, t)));
    for (const auto& s : symbols[r]) numerator.push_back(to_vec(s));
    q[r] = SubquotientCoordinates(decomposable, numerator);
    out.dims.push_back(q[r].dim());
    offset[r + 1] = offset[r] + q[r].dim();
    for (const auto& rep : q[r].representatives()) {
      BarElement x;
      for (const auto& [j, c] : rep) x.emplace(BarWord{0, words[j], 0}, c);
      out.representatives.push_back(std::move(x));
      out.degree.push_back(r);
    }
  }

  const std::size_t total = out.representatives.size();
  out.cobracket.resize(total);
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t r = out.degree[k];
    auto& cb = out.cobracket[k];
    auto add = [&cb](std::size_t i, std::size_t j, const Rational& c) {
      auto& slot = cb[{i, j}];
      slot += c;
      if (slot == 0) cb.erase({i, j});
    };
    for (std::size_t a = 1; a < r; ++a) {
      // group the (a, r - a) deconcatenation by its first factor
      std::map<std::vector<std::size_t>, SparseVec> split;
      for (const auto& [w, c] : out.representatives[k]) {
        std::vector<std::size_t> u(w.letters.begin(), w.letters.begin() + static_cast<long>(a));
        std::vector<std::size_t> v(w.letters.begin() + static_cast<long>(a), w.letters.end());
        axpy(split[u], c, SparseVec{{index(v), Rational(1)}});
      }
      for (const auto& [u, tail] : split) {
        auto left = q[a].coordinates_unchecked({{index(u), Rational(1)}});
        auto right = q[r - a].coordinates_unchecked(tail);
        for (const auto& [i, ci] : left)
          for (const auto& [j, cj] : right) {
            add(offset[a] + i, offset[r - a] + j, ci * cj);
            add(offset[r - a] + j, offset[a] + i, -ci * cj);
          }
      }
    }
  }

  std::map<std::pair<std::size_t, std::size_t>, LieElement> brackets;
  for (std::size_t k = 0; k < total; ++k)
    for (const auto& [ij, c] : out.cobracket[k]) brackets[ij].terms[k] += c;
  for (auto& [ij, x] : brackets)
    for (auto it = x.terms.begin(); it != x.terms.end();) it = it->second == 0 ? x.terms.erase(it) : std::next(it);
  std::vector<std::string> labels;
  std::vector<int> degrees;
  for (std::size_t k = 0; k < total; ++k) {
    labels.push_back("q" + std::to_string(k + 1));
    degrees.push_back(static_cast<int>(out.degree[k]));
  }
  out.dual_lie = std::make_shared<GradedNilpotentLie>(static_cast<int>(h.cap), labels, degrees, brackets);

  if (A.has_action()) {
    const auto& G = A.group();
    for (std::size_t g = 0; g < G.order(); ++g) {
      RatMatrix m(total, total);
      for (std::size_t k = 0; k < total; ++k) {
        const std::size_t r = out.degree[k];
        SparseVec img;
        for (const auto& [w, c] : out.representatives[k]) {
          std::vector<std::pair<std::vector<std::size_t>, Rational>> acted{{{}, c}};
          for (auto a : w.letters) {
            std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
            for (const auto& [pre, pc] : acted)
              for (const auto& [b, bc] : A.act(a, g)) {
                auto word = pre;
                word.push_back(b);
                next.emplace_back(std::move(word), pc * bc);
              }
            acted = std::move(next);
          }
          for (const auto& [word, wc] : acted) axpy(img, wc, SparseVec{{index(word), Rational(1)}});
        }
        for (const auto& [i, c] : q[r].coordinates(img)) m.set(offset[r] + i, k, c);
      }
      out.action.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace malcev
