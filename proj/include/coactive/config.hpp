/// @file  config.hpp
/// @brief Experiment configuration: a flat key=value format with exact
///        round-tripping, plus validation of task/learner/user combinations.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coactive/detail/parse.hpp"
#include "coactive/feedback.hpp"

namespace coactive {

enum class TaskKind { ranking, items, adversary };
enum class LearnerKind { perceptron, batch, convex };

inline const char* to_string(TaskKind k) {
  switch (k) {
    case TaskKind::ranking: return "ranking";
    case TaskKind::items: return "items";
    case TaskKind::adversary: return "adversary";
  }
  return "?";
}

inline const char* to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::perceptron: return "perceptron";
    case LearnerKind::batch: return "batch";
    case LearnerKind::convex: return "convex";
  }
  return "?";
}

inline const char* to_string(UserModelKind k) {
  switch (k) {
    case UserModelKind::strict_alpha: return "strict_alpha";
    case UserModelKind::noisy_relevance: return "noisy_relevance";
    case UserModelKind::rating_increment: return "rating_increment";
    case UserModelKind::expected_alpha: return "expected_alpha";
  }
  return "?";
}

inline TaskKind task_kind_from(const std::string& s) {
  if (s == "ranking") return TaskKind::ranking;
  if (s == "items") return TaskKind::items;
  if (s == "adversary") return TaskKind::adversary;
  throw std::invalid_argument("unknown task kind: " + s);
}

inline LearnerKind learner_kind_from(const std::string& s) {
  if (s == "perceptron") return LearnerKind::perceptron;
  if (s == "batch") return LearnerKind::batch;
  if (s == "convex") return LearnerKind::convex;
  throw std::invalid_argument("unknown learner kind: " + s);
}

inline UserModelKind user_kind_from(const std::string& s) {
  if (s == "strict_alpha") return UserModelKind::strict_alpha;
  if (s == "noisy_relevance") return UserModelKind::noisy_relevance;
  if (s == "rating_increment") return UserModelKind::rating_increment;
  if (s == "expected_alpha") return UserModelKind::expected_alpha;
  throw std::invalid_argument("unknown user model kind: " + s);
}

inline std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
  return grid;
}

/// Everything one experiment needs. A config (with the code version)
/// determines every output byte.
struct ExperimentConfig {
  TaskKind task = TaskKind::ranking;
  LearnerKind learner = LearnerKind::perceptron;
  UserModelKind user = UserModelKind::strict_alpha;
  double alpha = 1.0;          // strict/expected user strength; also the bound alpha
  double improve_prob = 1.0;   // expected_alpha mixture weight
  long rounds = 10000;         // horizon T
  std::vector<std::uint64_t> seeds = {1};
  std::vector<double> alpha_grid = default_alpha_grid();
  std::string out_dir = "traces";

  int batch_k = 4;             // batch learner update period
  double convex_g = 1.0;       // convex learner subgradient bound G
  double convex_rho = 1.0;     // convex learner projection ball radius

  // Ranking data: synthetic unless a file is given.
  int n_queries = 50;
  int n_docs = 20;
  int dim = 10;
  double label_noise = 0.25;
  std::uint64_t data_seed = 7;
  std::string ranking_data_path;

  // Item data: synthetic low-rank ratings unless a file is given.
  int n_users = 60;
  int n_items = 3090;
  int gen_rank = 8;  // planted rank of the synthetic ratings matrix
  double density = 0.30;
  double ratings_noise = 0.35;
  int als_rank = 16;
  double als_reg = 0.1;
  int als_iters = 20;
  std::string ratings_path;
  std::string ratings_delim = "::";

  double ridge_lambda = 1e-6;  // ground-truth least-squares fits
  std::uint64_t user_seed = 24301;  // base seed for user models, mixed per run
};

namespace detail {

inline std::string format_g17(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_g(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(',', start);
    if (pos == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      return parts;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline double config_real(const std::string& key, const std::string& value) {
  double x = 0.0;
  if (!parse_real(value, x)) {
    throw std::invalid_argument("config: bad real for " + key + ": " + value);
  }
  return x;
}

inline int config_int(const std::string& key, const std::string& value) {
  long x = 0;
  if (!parse_int(value, x)) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + value);
  }
  return static_cast<int>(x);
}

inline long config_long(const std::string& key, const std::string& value) {
  long x = 0;
  if (!parse_int(value, x)) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + value);
  }
  return x;
}

inline std::uint64_t config_u64(const std::string& key, const std::string& value) {
  unsigned long long x = 0;
  if (!parse_u64(value, x)) {
    throw std::invalid_argument("config: bad unsigned integer for " + key + ": " +
                                value);
  }
  return static_cast<std::uint64_t>(x);
}

inline std::vector<std::uint64_t> config_u64_list(const std::string& key,
                                                  const std::string& value) {
  std::vector<std::uint64_t> out;
  if (trim(value).empty()) return out;
  for (const std::string& tok : split_commas(value)) out.push_back(config_u64(key, tok));
  return out;
}

inline std::vector<double> config_real_list(const std::string& key,
                                            const std::string& value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  for (const std::string& tok : split_commas(value)) out.push_back(config_real(key, tok));
  return out;
}

template <class T, class F>
inline std::string join_list(const std::vector<T>& xs, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += fmt(xs[i]);
  }
  return s;
}

}  // namespace detail

/// Assigns one key=value pair into the config. Unknown keys are an error.
inline void set_config_value(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
  using namespace detail;
  if (key == "task") cfg.task = task_kind_from(value);
  else if (key == "learner") cfg.learner = learner_kind_from(value);
  else if (key == "user") cfg.user = user_kind_from(value);
  else if (key == "alpha") cfg.alpha = config_real(key, value);
  else if (key == "improve_prob") cfg.improve_prob = config_real(key, value);
  else if (key == "T") cfg.rounds = config_long(key, value);
  else if (key == "seeds") cfg.seeds = config_u64_list(key, value);
  else if (key == "alpha_grid") cfg.alpha_grid = config_real_list(key, value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "batch_k") cfg.batch_k = config_int(key, value);
  else if (key == "convex_g") cfg.convex_g = config_real(key, value);
  else if (key == "convex_rho") cfg.convex_rho = config_real(key, value);
  else if (key == "queries") cfg.n_queries = config_int(key, value);
  else if (key == "docs") cfg.n_docs = config_int(key, value);
  else if (key == "dim") cfg.dim = config_int(key, value);
  else if (key == "label_noise") cfg.label_noise = config_real(key, value);
  else if (key == "data_seed") cfg.data_seed = config_u64(key, value);
  else if (key == "data") cfg.ranking_data_path = value;
  else if (key == "users") cfg.n_users = config_int(key, value);
  else if (key == "items") cfg.n_items = config_int(key, value);
  else if (key == "gen_rank") cfg.gen_rank = config_int(key, value);
  else if (key == "density") cfg.density = config_real(key, value);
  else if (key == "ratings_noise") cfg.ratings_noise = config_real(key, value);
  else if (key == "als_rank") cfg.als_rank = config_int(key, value);
  else if (key == "als_reg") cfg.als_reg = config_real(key, value);
  else if (key == "als_iters") cfg.als_iters = config_int(key, value);
  else if (key == "ratings") cfg.ratings_path = value;
  else if (key == "delim") cfg.ratings_delim = value;
  else if (key == "ridge_lambda") cfg.ridge_lambda = config_real(key, value);
  else if (key == "user_seed") cfg.user_seed = config_u64(key, value);
  else throw std::invalid_argument("config: unknown key: " + key);
}

/// Parses the flat key=value format. '#' starts a comment; blank lines are
/// skipped; later assignments to a key win.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  ": empty key");
    }
    try {
      set_config_value(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse_config(in);
}

/// Canonical serialization: every key, fixed order, reals with 17
/// significant digits so parse(serialize(cfg)) reproduces cfg exactly.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  using namespace detail;
  std::ostringstream out;
  const auto real = [](double x) { return format_g17(x); };
  out << "task=" << to_string(cfg.task) << '\n';
  out << "learner=" << to_string(cfg.learner) << '\n';
  out << "user=" << to_string(cfg.user) << '\n';
  out << "alpha=" << real(cfg.alpha) << '\n';
  out << "improve_prob=" << real(cfg.improve_prob) << '\n';
  out << "T=" << cfg.rounds << '\n';
  out << "seeds="
      << join_list(cfg.seeds, [](std::uint64_t s) { return std::to_string(s); })
      << '\n';
  out << "alpha_grid=" << join_list(cfg.alpha_grid, real) << '\n';
  out << "out=" << cfg.out_dir << '\n';
  out << "batch_k=" << cfg.batch_k << '\n';
  out << "convex_g=" << real(cfg.convex_g) << '\n';
  out << "convex_rho=" << real(cfg.convex_rho) << '\n';
  out << "queries=" << cfg.n_queries << '\n';
  out << "docs=" << cfg.n_docs << '\n';
  out << "dim=" << cfg.dim << '\n';
  out << "label_noise=" << real(cfg.label_noise) << '\n';
  out << "data_seed=" << cfg.data_seed << '\n';
  out << "data=" << cfg.ranking_data_path << '\n';
  out << "users=" << cfg.n_users << '\n';
  out << "items=" << cfg.n_items << '\n';
  out << "gen_rank=" << cfg.gen_rank << '\n';
  out << "density=" << real(cfg.density) << '\n';
  out << "ratings_noise=" << real(cfg.ratings_noise) << '\n';
  out << "als_rank=" << cfg.als_rank << '\n';
  out << "als_reg=" << real(cfg.als_reg) << '\n';
  out << "als_iters=" << cfg.als_iters << '\n';
  out << "ratings=" << cfg.ratings_path << '\n';
  out << "delim=" << cfg.ratings_delim << '\n';
  out << "ridge_lambda=" << real(cfg.ridge_lambda) << '\n';
  out << "user_seed=" << cfg.user_seed << '\n';
  return out.str();
}

/// Checks ranges and the task/user/learner compatibility rules. Throws
/// std::invalid_argument describing the first violation.
inline void validate(const ExperimentConfig& cfg) {
  const auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (cfg.rounds < 1) fail("T must be >= 1");
  if (cfg.seeds.empty()) fail("seeds must be nonempty");
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0) fail("alpha must be in (0, 1]");
  if (cfg.improve_prob < 0.0 || cfg.improve_prob > 1.0) {
    fail("improve_prob must be in [0, 1]");
  }
  if (cfg.alpha_grid.empty()) fail("alpha_grid must be nonempty");
  for (double a : cfg.alpha_grid) {
    if (!(a > 0.0) || a > 1.0) fail("alpha_grid values must be in (0, 1]");
  }
  if (cfg.batch_k < 1) fail("batch_k must be >= 1");
  if (!(cfg.convex_g > 0.0)) fail("convex_g must be positive");
  if (!(cfg.convex_rho > 0.0)) fail("convex_rho must be positive");
  if (cfg.n_queries < 1) fail("queries must be >= 1");
  if (cfg.n_docs < 1) fail("docs must be >= 1");
  if (cfg.dim < 1) fail("dim must be >= 1");
  if (cfg.label_noise < 0.0) fail("label_noise must be >= 0");
  if (cfg.n_users < 1) fail("users must be >= 1");
  if (cfg.n_items < 1) fail("items must be >= 1");
  if (cfg.gen_rank < 1) fail("gen_rank must be >= 1");
  if (!(cfg.density > 0.0) || cfg.density > 1.0) fail("density must be in (0, 1]");
  if (cfg.ratings_noise < 0.0) fail("ratings_noise must be >= 0");
  if (cfg.als_rank < 1) fail("als_rank must be >= 1");
  if (cfg.als_reg < 0.0) fail("als_reg must be >= 0");
  if (cfg.als_iters < 1) fail("als_iters must be >= 1");
  if (cfg.ratings_delim.empty()) fail("delim must be nonempty");
  if (cfg.ridge_lambda < 0.0) fail("ridge_lambda must be >= 0");

  if (cfg.task == TaskKind::ranking && cfg.user == UserModelKind::rating_increment) {
    fail("rating_increment users require the items task");
  }
  if (cfg.task == TaskKind::items && cfg.user == UserModelKind::noisy_relevance) {
    fail("noisy_relevance users require the ranking task");
  }
  if (cfg.task == TaskKind::adversary && cfg.user != UserModelKind::strict_alpha) {
    fail("the adversary task plays its own feedback; set user=strict_alpha");
  }
  if (cfg.task == TaskKind::items && cfg.ratings_path.empty() &&
      cfg.n_items < 2 * cfg.rounds) {
    fail("items must be >= 2*T: each round can consume two items");
  }
  if (cfg.task == TaskKind::adversary && cfg.rounds > 20000) {
    fail("adversary contexts are dimension-T basis vectors; keep T <= 20000");
  }
}

}  // namespace coactive
