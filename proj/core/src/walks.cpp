#include "eposets/walks.hpp"

#include <cmath>
#include <sstream>

#include "eposets/qfamilies.hpp"

namespace eposets {

namespace {

constexpr double kAffineTol = 1e-12;
constexpr double kStochasticTol = 1e-10;
constexpr double kSelfAdjointTol = 1e-10;

void annotate_flags(const PosetContext& ctx, HDWalk& walk) {
  walk.stochastic_defect = stochasticity_defect(walk.matrix);
  walk.min_entry = walk.matrix.minCoeff();
  walk.self_adjoint_defect = self_adjointness_defect(ctx.pi(walk.level), walk.matrix);
  walk.stochastic = walk.stochastic_defect <= kStochasticTol && walk.min_entry >= -kStochasticTol;
  walk.self_adjoint = walk.self_adjoint_defect <= kSelfAdjointTol;
}

HDWalk combine(const PosetContext& ctx, std::vector<WalkTerm> terms, Eigen::MatrixXd matrix,
               int level, std::string name) {
  HDWalk walk;
  walk.level = level;
  walk.terms = std::move(terms);
  walk.matrix = std::move(matrix);
  walk.name = std::move(name);
  for (const auto& term : walk.terms) {
    if (term.coeff == 0.0) continue;
    walk.height = std::max(walk.height, term.walk.height());
    walk.weight += std::abs(term.coeff);
  }
  annotate_flags(ctx, walk);
  return walk;
}

}  // namespace

int PureWalkDescriptor::height() const {
  int h = 0;
  for (Step s : word)
    if (s == Step::Down) ++h;
  return h;
}

std::vector<int> PureWalkDescriptor::down_positions() const {
  std::vector<int> pos;
  for (size_t p = 0; p < word.size(); ++p)
    if (word[p] == Step::Down) pos.push_back(static_cast<int>(p) + 1);
  return pos;
}

bool PureWalkDescriptor::valid(int d) const {
  int lvl = level;
  int ups = 0, downs = 0;
  for (Step s : word) {
    lvl += (s == Step::Up) ? 1 : -1;
    (s == Step::Up ? ups : downs)++;
    if (lvl < 0 || lvl > d) return false;
  }
  return lvl == level && ups == downs;
}

std::string PureWalkDescriptor::to_string() const {
  std::string s = "k" + std::to_string(level) + ":";
  for (Step st : word) s += (st == Step::Up) ? 'U' : 'D';
  return s;
}

PureWalkDescriptor canonical_up_descriptor(int k, int j) {
  PureWalkDescriptor desc{k, {}};
  desc.word.insert(desc.word.end(), static_cast<size_t>(j), Step::Up);
  desc.word.insert(desc.word.end(), static_cast<size_t>(j), Step::Down);
  return desc;
}

PureWalkDescriptor canonical_down_descriptor(int k, int j) {
  PureWalkDescriptor desc{k, {}};
  desc.word.insert(desc.word.end(), static_cast<size_t>(j), Step::Down);
  desc.word.insert(desc.word.end(), static_cast<size_t>(j), Step::Up);
  return desc;
}

Eigen::MatrixXd realize_pure_walk(const PosetContext& ctx, const PureWalkDescriptor& desc) {
  if (!desc.valid(ctx.d()))
    throw LevelBoundsError("pure walk word leaves [0,d] or is unbalanced: " + desc.to_string());
  const int n = ctx.poset().level_size(desc.level);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  int lvl = desc.level;
  for (Step s : desc.word) {
    if (s == Step::Up) {
      m = ctx.up(lvl).m * m;
      ++lvl;
    } else {
      m = ctx.down(lvl).m * m;
      --lvl;
    }
  }
  return m;
}

HDWalk hd_walk(const PosetContext& ctx, std::vector<WalkTerm> terms, std::string name) {
  if (terms.empty()) throw EmptyInputError("hd_walk: no terms");
  const int level = terms.front().walk.level;
  double coeff_sum = 0.0;
  for (const auto& term : terms) {
    if (term.walk.level != level) throw LevelMismatchError("hd_walk: mixed walk levels");
    coeff_sum += term.coeff;
  }
  if (std::abs(coeff_sum - 1.0) > kAffineTol)
    throw NotAffineError("hd_walk: coefficients sum to " + std::to_string(coeff_sum));
  const int n = ctx.poset().level_size(level);
  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
  for (const auto& term : terms) {
    if (term.coeff == 0.0) continue;
    matrix += term.coeff * realize_pure_walk(ctx, term.walk);
  }
  if (name.empty()) name = "hd-walk";
  return combine(ctx, std::move(terms), std::move(matrix), level, std::move(name));
}

HDWalk identity_walk(const PosetContext& ctx, int k) {
  if (k < 0 || k > ctx.d()) throw LevelBoundsError("identity_walk: bad level");
  return hd_walk(ctx, {WalkTerm{1.0, PureWalkDescriptor{k, {}}}},
                 "I:k=" + std::to_string(k));
}

HDWalk canonical_up(const PosetContext& ctx, int k, int j) {
  if (j < 0 || k < 0 || k + j > ctx.d()) throw LevelBoundsError("canonical_up: need k+j <= d");
  return hd_walk(ctx, {WalkTerm{1.0, canonical_up_descriptor(k, j)}},
                 "N:k=" + std::to_string(k) + ",j=" + std::to_string(j));
}

HDWalk canonical_down(const PosetContext& ctx, int k, int j) {
  if (j < 0 || j > k || k > ctx.d()) throw LevelBoundsError("canonical_down: need j <= k <= d");
  return hd_walk(ctx, {WalkTerm{1.0, canonical_down_descriptor(k, j)}},
                 "Nd:k=" + std::to_string(k) + ",j=" + std::to_string(j));
}

HDWalk swap_walk_restriction(const PosetContext& ctx, int k, int j) {
  const GradedPoset& poset = ctx.poset();
  if (poset.kind != FamilyKind::QSimplicial)
    throw Error("swap_walk_restriction: poset is not q-simplicial");
  if (j < 0 || k + j > ctx.d()) throw LevelBoundsError("swap_walk_restriction: need k+j <= d");
  const std::string name = "S:k=" + std::to_string(k) + ",j=" + std::to_string(j);
  if (j == 0) {
    HDWalk id = identity_walk(ctx, k);
    id.name = name;
    return id;
  }
  HDWalk upper = canonical_up(ctx, k, j);
  const int n = poset.level_size(k);
  std::vector<FqMatrix> spaces;
  spaces.reserve(static_cast<size_t>(n));
  for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v)
    spaces.push_back(face_to_matrix(poset, k, v));

  Eigen::MatrixXd matrix = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    double row_mass = 0.0;
    for (int w = 0; w < n; ++w) {
      const double p = upper.matrix(v, w);
      if (p <= 0.0) continue;
      if (intersection_dim(spaces[static_cast<size_t>(v)], spaces[static_cast<size_t>(w)]) == k - j) {
        matrix(v, w) = p;
        row_mass += p;
      }
    }
    if (row_mass <= 0.0)
      throw EmptySupportError("swap walk row " + std::to_string(v) +
                              " has no intersection-" + std::to_string(k - j) + " partner");
    matrix.row(v) /= row_mass;
  }
  // The affine representation comes from the inversion identity; both
  // constructions share it so heights/weights agree.
  HDWalk inv = swap_walk_inversion(ctx, k, j);
  return combine(ctx, inv.terms, std::move(matrix), k, name);
}

HDWalk swap_walk_inversion(const PosetContext& ctx, int k, int j) {
  if (j < 0 || k + j > ctx.d()) throw LevelBoundsError("swap_walk_inversion: need k+j <= d");
  const long q = ctx.poset().q;
  if (q < 2) throw Error("swap_walk_inversion: poset carries no field size");
  const std::string name = "Sinv:k=" + std::to_string(k) + ",j=" + std::to_string(j);
  if (j == 0) {
    HDWalk id = identity_walk(ctx, k);
    id.name = name;
    return id;
  }
  const BigInt den = q_power(q, static_cast<long>(j) * j) * gaussian_binomial(k, k - j, q);
  std::vector<WalkTerm> terms;
  for (int i = 0; i <= j; ++i) {
    BigInt num = q_power(q, (static_cast<long>(j - i) * (j - i - 1)) / 2) *
                 gaussian_binomial(j, i, q) * gaussian_binomial(k + i, i, q);
    double coeff = to_double(num) / to_double(den);
    if ((j - i) % 2 == 1) coeff = -coeff;
    terms.push_back(WalkTerm{coeff, canonical_up_descriptor(k, i)});
  }
  return hd_walk(ctx, std::move(terms), name);
}

std::vector<BigInt> q_binomial_forward(const std::vector<BigInt>& b, long q) {
  std::vector<BigInt> a(b.size());
  for (size_t j = 1; j <= b.size(); ++j) {
    BigInt sum = 0;
    for (size_t i = 1; i <= j; ++i) {
      BigInt term = gaussian_binomial(static_cast<long>(j), static_cast<long>(i), q) * b[i - 1];
      if (i % 2 == 1) sum -= term; else sum += term;
    }
    a[j - 1] = sum;
  }
  return a;
}

std::vector<BigInt> q_binomial_inversion(const std::vector<BigInt>& a, long q) {
  std::vector<BigInt> b(a.size());
  for (size_t j = 1; j <= a.size(); ++j) {
    BigInt sum = 0;
    for (size_t i = 1; i <= j; ++i) {
      const long gap = static_cast<long>(j - i);
      BigInt term = q_power(q, gap * (gap - 1) / 2) *
                    gaussian_binomial(static_cast<long>(j), static_cast<long>(i), q) * a[i - 1];
      if (i % 2 == 1) sum -= term; else sum += term;
    }
    b[j - 1] = sum;
  }
  return b;
}

namespace {

int parse_int_field(const std::string& body, const std::string& key) {
  const std::string needle = key + "=";
  size_t pos = body.find(needle);
  if (pos == std::string::npos) throw ParseError("walk descriptor missing '" + key + "=': " + body);
  size_t start = pos + needle.size();
  size_t end = start;
  while (end < body.size() && (std::isdigit(static_cast<unsigned char>(body[end])))) ++end;
  if (end == start) throw ParseError("walk descriptor has empty '" + key + "': " + body);
  return std::stoi(body.substr(start, end - start));
}

HDWalk parse_single(const PosetContext& ctx, const std::string& desc, int inferred_level) {
  size_t colon = desc.find(':');
  std::string head = colon == std::string::npos ? desc : desc.substr(0, colon);
  std::string body = colon == std::string::npos ? std::string{} : desc.substr(colon + 1);
  if (head == "I") {
    int k = body.empty() ? inferred_level : parse_int_field(body, "k");
    if (k < 0) throw ParseError("identity walk needs a level: " + desc);
    return identity_walk(ctx, k);
  }
  if (head == "N") return canonical_up(ctx, parse_int_field(body, "k"), parse_int_field(body, "j"));
  if (head == "Nd") return canonical_down(ctx, parse_int_field(body, "k"), parse_int_field(body, "j"));
  if (head == "S") return swap_walk_restriction(ctx, parse_int_field(body, "k"), parse_int_field(body, "j"));
  if (head == "Sinv") return swap_walk_inversion(ctx, parse_int_field(body, "k"), parse_int_field(body, "j"));
  if (head == "UD") return canonical_down(ctx, parse_int_field(body, "k"), 1);
  throw ParseError("unknown walk descriptor: " + desc);
}

}  // namespace

HDWalk parse_walk(const PosetContext& ctx, const std::string& descriptor) {
  if (descriptor.rfind("mix:", 0) == 0) {
    std::string inner = descriptor.substr(4);
    if (inner.size() < 2 || inner.front() != '[' || inner.back() != ']')
      throw ParseError("mix descriptor needs [..]: " + descriptor);
    inner = inner.substr(1, inner.size() - 2);
    std::vector<std::pair<double, std::string>> parts;
    std::stringstream ss(inner);
    std::string piece;
    while (std::getline(ss, piece, ';')) {
      size_t star = piece.find('*');
      if (star == std::string::npos) throw ParseError("mix term needs coeff*walk: " + piece);
      parts.emplace_back(std::stod(piece.substr(0, star)), piece.substr(star + 1));
    }
    if (parts.empty()) throw ParseError("empty mix descriptor");
    int level = -1;
    for (const auto& [c, d] : parts)
      if (d.find("k=") != std::string::npos) level = parse_int_field(d, "k");
    std::vector<WalkTerm> terms;
    Eigen::MatrixXd matrix;
    bool first = true;
    int out_level = -1;
    for (const auto& [coeff, d] : parts) {
      HDWalk member = parse_single(ctx, d, level);
      if (first) {
        matrix = coeff * member.matrix;
        out_level = member.level;
        first = false;
      } else {
        if (member.level != out_level) throw LevelMismatchError("mix walks live on different levels");
        matrix += coeff * member.matrix;
      }
      for (auto term : member.terms) {
        term.coeff *= coeff;
        terms.push_back(std::move(term));
      }
    }
    double total = 0.0;
    for (const auto& t : terms) total += t.coeff;
    if (std::abs(total - 1.0) > kAffineTol)
      throw NotAffineError("mix coefficients sum to " + std::to_string(total));
    HDWalk walk;
    walk.level = out_level;
    walk.terms = std::move(terms);
    walk.matrix = std::move(matrix);
    walk.name = descriptor;
    for (const auto& term : walk.terms) {
      if (term.coeff == 0.0) continue;
      walk.height = std::max(walk.height, term.walk.height());
      walk.weight += std::abs(term.coeff);
    }
    annotate_flags(ctx, walk);
    return walk;
  }
  return parse_single(ctx, descriptor, -1);
}

std::shared_ptr<const HDWalk> get_walk(const PosetContext& ctx, const std::string& descriptor) {
  if (auto hit = ctx.cached_walk(descriptor)) return hit;
  auto walk = std::make_shared<HDWalk>(parse_walk(ctx, descriptor));
  return ctx.store_walk(descriptor, walk);
}

}  // namespace eposets
