#include "qres/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qres/errors.hpp"

namespace qres {

using json = nlohmann::json;

bool InputBox::contains(const Eigen::VectorXd& u, double tol) const {
  if (u.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double slack = tol * std::max(1.0, upper[i] - lower[i]);
    if (u[i] < lower[i] - slack || u[i] > upper[i] + slack) return false;
  }
  return true;
}

IntegratorSystem IntegratorSystem::make(std::string name, int order, Eigen::MatrixXd b_bar,
                                        Eigen::VectorXd u_min, Eigen::VectorXd u_max,
                                        std::vector<std::string> labels) {
  if (order < 1) throw InvariantError("order", "must be a positive integer");
  if (b_bar.rows() < 1) throw InvariantError("B", "needs at least one row");
  if (b_bar.cols() < 1) throw InvariantError("B", "needs at least one column");
  if (!b_bar.allFinite()) throw InvariantError("B", "entries must be finite");
  if (u_min.size() != b_bar.cols())
    throw InvariantError("u_min", "length must equal the number of columns of B");
  if (u_max.size() != b_bar.cols())
    throw InvariantError("u_max", "length must equal the number of columns of B");
  if (!u_min.allFinite()) throw InvariantError("u_min", "entries must be finite");
  if (!u_max.allFinite()) throw InvariantError("u_max", "entries must be finite");
  for (Eigen::Index i = 0; i < u_min.size(); ++i) {
    if (!(u_min[i] < u_max[i]))
      throw InvariantError("u_min[" + std::to_string(i) + "]",
                           "must be strictly below u_max[" + std::to_string(i) + "]");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != b_bar.cols())
    throw InvariantError("labels", "length must equal the number of columns of B");

  IntegratorSystem sys;
  sys.name_ = std::move(name);
  sys.order_ = order;
  sys.b_bar_ = std::move(b_bar);
  sys.box_ = InputBox{std::move(u_min), std::move(u_max)};
  sys.labels_ = std::move(labels);
  return sys;
}

IntegratorSystem IntegratorSystem::with_order(int order) const {
  return make(name_, order, b_bar_, box_.lower, box_.upper, labels_);
}

Eigen::MatrixXd ActuatorSplit::reassemble() const {
  Eigen::MatrixXd full(b_.rows(), b_.cols() + c_.cols());
  for (size_t j = 0; j < kept_.size(); ++j) full.col(kept_[j]) = b_.col(j);
  for (size_t j = 0; j < lost_.size(); ++j) full.col(lost_[j]) = c_.col(j);
  return full;
}

Eigen::VectorXd ActuatorSplit::merge_inputs(const Eigen::VectorXd& u,
                                            const Eigen::VectorXd& w) const {
  if (u.size() != b_.cols() || w.size() != c_.cols())
    throw ArgumentError("merge_inputs: input sizes do not match the split");
  Eigen::VectorXd full(b_.cols() + c_.cols());
  for (size_t j = 0; j < kept_.size(); ++j) full[kept_[j]] = u[j];
  for (size_t j = 0; j < lost_.size(); ++j) full[lost_[j]] = w[j];
  return full;
}

Direction::Direction(Eigen::VectorXd d) : d_(std::move(d)) {
  if (d_.size() == 0) throw ArgumentError("direction must have at least one component");
  if (!d_.allFinite()) throw ArgumentError("direction entries must be finite");
}

Direction Direction::between(const Eigen::VectorXd& x_goal, const Eigen::VectorXd& x0) {
  if (x_goal.size() != x0.size()) throw ArgumentError("x_goal and x0 differ in size");
  return Direction(x_goal - x0);
}

ActuatorSplit split(const IntegratorSystem& sys, const std::vector<int>& lost) {
  const int total = static_cast<int>(sys.input_dim());
  if (lost.empty()) throw ArgumentError("split: at least one lost column is required");
  std::set<int> seen;
  for (int j : lost) {
    if (j < 0 || j >= total)
      throw ArgumentError("split: column index " + std::to_string(j) + " out of range [0, " +
                          std::to_string(total) + ")");
    if (!seen.insert(j).second)
      throw ArgumentError("split: duplicate column index " + std::to_string(j));
  }
  if (static_cast<int>(lost.size()) == total)
    throw ArgumentError("split: cannot lose every column");

  ActuatorSplit s(sys);
  s.lost_ = lost;
  for (int j = 0; j < total; ++j)
    if (!seen.count(j)) s.kept_.push_back(j);

  const Eigen::Index n = sys.state_dim();
  const auto m = static_cast<Eigen::Index>(s.kept_.size());
  const auto p = static_cast<Eigen::Index>(s.lost_.size());
  s.b_.resize(n, m);
  s.c_.resize(n, p);
  s.u_box_ = InputBox{Eigen::VectorXd(m), Eigen::VectorXd(m)};
  s.w_box_ = InputBox{Eigen::VectorXd(p), Eigen::VectorXd(p)};
  for (Eigen::Index j = 0; j < m; ++j) {
    const int src = s.kept_[j];
    s.b_.col(j) = sys.b_bar().col(src);
    s.u_box_.lower[j] = sys.u_min()[src];
    s.u_box_.upper[j] = sys.u_max()[src];
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    const int src = s.lost_[j];
    s.c_.col(j) = sys.b_bar().col(src);
    s.w_box_.lower[j] = sys.u_min()[src];
    s.w_box_.upper[j] = sys.u_max()[src];
  }
  return s;
}

namespace {

// 1-based line and column of a byte offset, for parse diagnostics.
std::string location_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Eigen::VectorXd read_vector(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ParseError(std::string("field '") + key + "[" + std::to_string(i) +
                       "]' must be a number");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd read_matrix(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& rows = doc.at(key);
  if (!rows.is_array() || rows.empty())
    throw ParseError(std::string("field '") + key + "' must be a non-empty array of rows");
  const std::size_t cols = rows[0].is_array() ? rows[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols)
      throw ParseError(std::string("field '") + key + "' row " + std::to_string(i) +
                       " has inconsistent length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!rows[i][j].is_number())
        throw ParseError(std::string("field '") + key + "[" + std::to_string(i) + "][" +
                         std::to_string(j) + "]' must be a number");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace

IntegratorSystem parse_system(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("model parse error at " + location_of(text, e.byte > 0 ? e.byte - 1 : 0) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document must be an object");

  std::string name = doc.value("name", std::string{});
  if (!doc.contains("order") || !doc.at("order").is_number_integer())
    throw ParseError("field 'order' must be an integer");
  const int order = doc.at("order").get<int>();
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc.at("labels").is_array()) throw ParseError("field 'labels' must be an array");
    for (const auto& l : doc.at("labels")) {
      if (!l.is_string()) throw ParseError("field 'labels' must hold strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return IntegratorSystem::make(std::move(name), order, read_matrix(doc, "B"),
                                read_vector(doc, "u_min"), read_vector(doc, "u_max"),
                                std::move(labels));
}

std::string serialize_system(const IntegratorSystem& sys) {
  json doc;
  doc["name"] = sys.name();
  doc["order"] = sys.order();
  json rows = json::array();
  for (Eigen::Index i = 0; i < sys.b_bar().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < sys.b_bar().cols(); ++j) row.push_back(sys.b_bar()(i, j));
    rows.push_back(std::move(row));
  }
  doc["B"] = std::move(rows);
  doc["u_min"] = std::vector<double>(sys.u_min().data(), sys.u_min().data() + sys.u_min().size());
  doc["u_max"] = std::vector<double>(sys.u_max().data(), sys.u_max().data() + sys.u_max().size());
  if (!sys.labels().empty()) doc["labels"] = sys.labels();
  return doc.dump(2) + "\n";
}

IntegratorSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_system(const IntegratorSystem& sys, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file '" + path.string() + "'");
  out << serialize_system(sys);
}

}  // namespace qres
