#include "krein/instance.hpp"

#include "krein/error.hpp"
#include "krein/sampling.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <set>
#include <sstream>
#include <vector>

namespace krein {

ToleranceProfile ToleranceOverrides::apply(ToleranceProfile base) const {
  if (rank_rel) base.rank_rel = *rank_rel;
  if (psd_slack) base.psd_slack = *psd_slack;
  if (residual) base.residual = *residual;
  return base;
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // no negative zero in output
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i < line.size() && line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) words.push_back(line.substr(i, j - i));
    i = j;
  }
  return words;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t start = 0;
    std::size_t number = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::string_view line = text.substr(start, end - start);
      auto words = split_words(line);
      if (!words.empty()) lines_.push_back({number, std::move(words)});
      start = end + 1;
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  std::size_t line_number() const { return done() ? 0 : lines_[pos_].number; }
  const std::vector<std::string_view>& next() {
    if (done()) throw Error(ErrorKind::ParseError, "unexpected end of input");
    return lines_[pos_++].words;
  }
  std::size_t last_number() const { return pos_ == 0 ? 0 : lines_[pos_ - 1].number; }

 private:
  struct Line {
    std::size_t number;
    std::vector<std::string_view> words;
  };
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_number(std::string_view word, std::size_t line) {
  double value = 0.0;
  const char* first = word.data();
  const char* last = word.data() + word.size();
  if (!word.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) fail(line, "not a number: '" + std::string(word) + "'");
  if (!std::isfinite(value)) fail(line, "non-finite value: '" + std::string(word) + "'");
  return value;
}

Index parse_count(std::string_view word, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size() || value < 0) {
    fail(line, "not a non-negative integer: '" + std::string(word) + "'");
  }
  return static_cast<Index>(value);
}

// `count` rows of `width` numbers each, returned as a count x width matrix.
Matrix read_rows(LineReader& reader, Index count, Index width) {
  Matrix rows(count, width);
  for (Index i = 0; i < count; ++i) {
    const auto& words = reader.next();
    const std::size_t line = reader.last_number();
    if (static_cast<Index>(words.size()) != width) {
      fail(line, "expected " + std::to_string(width) + " numbers, got " + std::to_string(words.size()));
    }
    for (Index j = 0; j < width; ++j) rows(i, j) = parse_number(words[j], line);
  }
  return rows;
}

void expect_arity(const std::vector<std::string_view>& words, std::size_t arity, std::size_t line) {
  if (words.size() != arity + 1) {
    fail(line, "'" + std::string(words.front()) + "' takes " + std::to_string(arity) + " argument(s)");
  }
}

bool parse_tolerance_line(const std::vector<std::string_view>& words, std::size_t line,
                          ToleranceOverrides& tol) {
  std::optional<double>* slot = nullptr;
  if (words.front() == "tol_rank") slot = &tol.rank_rel;
  if (words.front() == "tol_psd") slot = &tol.psd_slack;
  if (words.front() == "tol_residual") slot = &tol.residual;
  if (slot == nullptr) return false;
  expect_arity(words, 1, line);
  const double value = parse_number(words[1], line);
  if (value <= 0.0) fail(line, "tolerances must be positive");
  *slot = value;
  return true;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  LineReader reader(text);
  Instance out;
  std::set<std::string, std::less<>> seen;
  bool have_dim = false;

  auto need_dim = [&](std::size_t line) {
    if (!have_dim) fail(line, "'dim' must come before vector data");
  };

  while (!reader.done()) {
    const auto words = reader.next();
    const std::size_t line = reader.last_number();
    const std::string_view key = words.front();
    if (!seen.insert(std::string(key)).second) fail(line, "duplicate key '" + std::string(key) + "'");

    if (key == "kind") {
      expect_arity(words, 1, line);
      parse_kind(words[1]);
      out.kind = std::string(words[1]);
    } else if (key == "dim") {
      expect_arity(words, 1, line);
      out.dim = parse_count(words[1], line);
      if (out.dim == 0) fail(line, "dim must be positive");
      have_dim = true;
    } else if (key == "domain" || key == "image") {
      expect_arity(words, 1, line);
      need_dim(line);
      const Index count = parse_count(words[1], line);
      Matrix columns = read_rows(reader, count, out.dim).transpose();
      (key == "domain" ? out.domain : out.image) = std::move(columns);
    } else if (key == "full_operator") {
      expect_arity(words, 2, line);
      need_dim(line);
      const Index r = parse_count(words[1], line);
      const Index c = parse_count(words[2], line);
      if (r != out.dim || c != out.dim) {
        throw Error(ErrorKind::BadShape, "full_operator must be dim x dim");
      }
      out.full_operator = read_rows(reader, r, c);
    } else if (key == "equation_a" || key == "equation_b") {
      expect_arity(words, 2, line);
      need_dim(line);
      const Index r = parse_count(words[1], line);
      const Index c = parse_count(words[2], line);
      if (r != out.dim) throw Error(ErrorKind::BadShape, std::string(key) + " must have dim rows");
      if (!out.equation) out.equation = EquationData{};
      (key == "equation_a" ? out.equation->a : out.equation->b) = read_rows(reader, r, c);
    } else if (key == "seed") {
      expect_arity(words, 1, line);
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(words[1].data(), words[1].data() + words[1].size(), seed);
      if (ec != std::errc() || ptr != words[1].data() + words[1].size()) fail(line, "bad seed");
      out.seed = seed;
    } else if (!parse_tolerance_line(words, line, out.tolerances)) {
      fail(line, "unknown key '" + std::string(key) + "'");
    }
  }

  if (!have_dim) throw Error(ErrorKind::MissingSection, "missing 'dim'");
  if (out.image && !out.domain) throw Error(ErrorKind::MissingSection, "'image' needs 'domain'");
  if (out.domain && !out.image && !out.full_operator) {
    throw Error(ErrorKind::MissingSection, "'domain' needs 'image' or 'full_operator'");
  }
  if (out.image && out.domain->cols() != out.image->cols()) {
    throw Error(ErrorKind::BadShape, "'domain' and 'image' list different numbers of vectors");
  }
  if (out.equation) {
    if (!seen.contains("equation_a") || !seen.contains("equation_b")) {
      throw Error(ErrorKind::MissingSection, "'equation_a' and 'equation_b' must appear together");
    }
    if (out.equation->a.cols() != out.equation->b.cols()) {
      throw Error(ErrorKind::BadShape, "equation matrices differ in shape");
    }
  }
  return out;
}

Instance read_instance(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_instance(text);
}

ToleranceOverrides parse_tolerance_file(std::string_view text) {
  LineReader reader(text);
  ToleranceOverrides out;
  while (!reader.done()) {
    const auto words = reader.next();
    if (!parse_tolerance_line(words, reader.last_number(), out)) {
      fail(reader.last_number(), "unknown key '" + std::string(words.front()) + "'");
    }
  }
  return out;
}

namespace {

void write_rows(std::ostringstream& os, const Matrix& rows) {
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < rows.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_double(rows(i, j));
    }
    os << '\n';
  }
}

}  // namespace

std::string write_instance(const Instance& instance) {
  std::ostringstream os;
  if (instance.kind) os << "kind " << *instance.kind << '\n';
  os << "dim " << instance.dim << '\n';
  if (instance.domain) {
    os << "domain " << instance.domain->cols() << '\n';
    write_rows(os, instance.domain->transpose());
  }
  if (instance.image) {
    os << "image " << instance.image->cols() << '\n';
    write_rows(os, instance.image->transpose());
  }
  if (instance.full_operator) {
    os << "full_operator " << instance.dim << ' ' << instance.dim << '\n';
    write_rows(os, *instance.full_operator);
  }
  if (instance.equation) {
    os << "equation_a " << instance.equation->a.rows() << ' ' << instance.equation->a.cols() << '\n';
    write_rows(os, instance.equation->a);
    os << "equation_b " << instance.equation->b.rows() << ' ' << instance.equation->b.cols() << '\n';
    write_rows(os, instance.equation->b);
  }
  const ToleranceOverrides& tol = instance.tolerances;
  if (tol.rank_rel) os << "tol_rank " << format_double(*tol.rank_rel) << '\n';
  if (tol.psd_slack) os << "tol_psd " << format_double(*tol.psd_slack) << '\n';
  if (tol.residual) os << "tol_residual " << format_double(*tol.residual) << '\n';
  if (instance.seed) os << "seed " << *instance.seed << '\n';
  return os.str();
}

InstanceKind parse_kind(std::string_view name) {
  if (name == "positive") return InstanceKind::Positive;
  if (name == "contraction") return InstanceKind::Contraction;
  if (name == "psd_full") return InstanceKind::PsdFull;
  if (name == "equation") return InstanceKind::Equation;
  throw Error(ErrorKind::ParseError, "unknown instance kind '" + std::string(name) + "'");
}

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Positive: return "positive";
    case InstanceKind::Contraction: return "contraction";
    case InstanceKind::PsdFull: return "psd_full";
    case InstanceKind::Equation: return "equation";
  }
  return "positive";
}

namespace {

// Full rank with a spectral floor most of the time, otherwise rank deficient.
Matrix planted_psd(Index n, Rng& rng) {
  if (uniform(0.0, 1.0, rng) < 0.7) {
    return random_psd(n, n, rng) + 0.1 * Matrix::Identity(n, n);
  }
  return random_psd(n, uniform_index(1, n, rng), rng);
}

// Positive symmetric action on a k-dimensional subspace whose form vanishes on
// some direction that the operator does not annihilate.
std::pair<Matrix, Matrix> planted_obstruction(Index n, Index k, Rng& rng) {
  const Matrix q = random_orthonormal(n, n, rng);
  const Matrix q_dom = q.leftCols(k);
  const Matrix q_perp = q.rightCols(n - k);
  const Index form_rank = uniform_index(0, k - 1, rng);
  const Matrix factor = gaussian(k, form_rank, rng);
  const Matrix form = factor * factor.transpose() / static_cast<double>(k);
  const Matrix leak = gaussian(n - k, k, rng);
  const Matrix image = q_dom * form + q_perp * leak;
  const Matrix mix = gaussian(k, k, rng);
  return {q_dom * mix, image * mix};
}

Matrix planted_contraction(Index n, Rng& rng, bool strict) {
  if (!strict && uniform(0.0, 1.0, rng) < 0.5) {
    // Symmetric involution: every vector attains the norm.
    const Index reflected = uniform_index(1, std::max<Index>(n - 1, 1), rng);
    const Matrix w = random_orthonormal(n, reflected, rng);
    return Matrix::Identity(n, n) - 2.0 * w * w.transpose();
  }
  const Matrix v = random_orthonormal(n, n, rng);
  Vector lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = uniform(-1.0, 1.0, rng);
  lambda(0) = uniform(0.0, 1.0, rng) < 0.5 ? 1.0 : -1.0;
  if (strict) lambda *= 0.8;
  return symmetrize(v * lambda.asDiagonal() * v.transpose());
}

}  // namespace

Instance gen_instance(InstanceKind kind, Index n, Index k, std::uint64_t seed, bool degenerate) {
  if (n < 1 || n > 64 || k < 1 || k > n) {
    throw Error(ErrorKind::BadShape, "need 1 <= k <= n <= 64");
  }
  if (degenerate && (kind == InstanceKind::Contraction || kind == InstanceKind::PsdFull)) {
    throw Error(ErrorKind::BadShape, "degenerate instances exist for positive and equation kinds");
  }
  if (degenerate && k == n) {
    throw Error(ErrorKind::BadShape, "a degenerate instance needs k < n");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(n),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(degenerate)};
  Rng rng(seq);

  Instance out;
  out.kind = std::string(to_string(kind));
  out.dim = n;
  out.seed = seed;

  switch (kind) {
    case InstanceKind::Positive: {
      if (degenerate) {
        auto [dom, image] = planted_obstruction(n, k, rng);
        out.domain = std::move(dom);
        out.image = std::move(image);
      } else {
        const Matrix s0 = planted_psd(n, rng);
        out.domain = gaussian(n, k, rng);
        out.image = s0 * *out.domain;
      }
      break;
    }
    case InstanceKind::Contraction: {
      const bool strict = uniform(0.0, 1.0, rng) < 0.2;
      const Matrix s0 = planted_contraction(n, rng, strict);
      Matrix dom = gaussian(n, k, rng);
      if (strict || uniform(0.0, 1.0, rng) < 0.5) {
        // Keep an eigenvector of eigenvalue +-1 (or its scaled copy) in D.
        Eigen::SelfAdjointEigenSolver<Matrix> eig(s0);
        const Vector& lambda = eig.eigenvalues();
        const Index top = lambda.cwiseAbs().maxCoeff() == std::abs(lambda(0)) ? 0 : n - 1;
        dom.col(0) = eig.eigenvectors().col(top);
      }
      out.domain = std::move(dom);
      out.image = s0 * *out.domain;
      break;
    }
    case InstanceKind::PsdFull: {
      const Matrix s0 = planted_psd(n, rng);
      out.full_operator = s0;
      out.domain = Matrix::Identity(n, k);
      out.image = s0 * *out.domain;
      break;
    }
    case InstanceKind::Equation: {
      EquationData eq;
      if (degenerate) {
        auto [dom, image] = planted_obstruction(n, k, rng);
        eq.a = std::move(dom);
        eq.b = std::move(image);
      } else {
        const Matrix s0 = planted_psd(n, rng);
        if (k > 1 && uniform(0.0, 1.0, rng) < 0.2) {
          const Index r = uniform_index(1, k - 1, rng);
          eq.a = gaussian(n, r, rng) * gaussian(r, k, rng);
        } else {
          eq.a = gaussian(n, k, rng);
        }
        eq.b = s0 * eq.a;
      }
      out.equation = std::move(eq);
      break;
    }
  }
  return out;
}

}  // namespace krein
