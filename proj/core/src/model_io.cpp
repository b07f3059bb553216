#include "mvtm/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvtm/error.hpp"

#include "format.hpp"

namespace mvtm {

namespace {

using nlohmann::json;

json flatten(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

json flatten(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::MatrixXd unflatten(const json& arr, Eigen::Index rows,
                          Eigen::Index cols, const char* what) {
  if (!arr.is_array() ||
      arr.size() != static_cast<std::size_t>(rows * cols)) {
    std::ostringstream msg;
    msg << "model: field '" << what << "' must hold " << rows * cols
        << " numbers";
    throw DimensionError(msg.str());
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = arr[idx++].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd unflatten_vec(const json& arr, Eigen::Index size,
                              const char* what) {
  return unflatten(arr, size, 1, what).col(0);
}

double parse_double(const std::string& text, int line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    std::ostringstream msg;
    msg << "csv: line " << line << ": bad number '" << text << "'";
    throw ParseError(msg.str());
  }
  return value;
}

}  // namespace

void save_model(const TopicModel& model, const std::string& path) {
  json doc;
  doc["k"] = model.num_topics();
  doc["v"] = model.vocab_size();
  doc["beta"] = flatten(model.beta);
  doc["gamma"] = flatten(model.gamma);
  doc["subspace"] = {{"mean", flatten(model.subspace.mean)},
                     {"basis", flatten(model.subspace.basis)},
                     {"eigenvalues", flatten(model.subspace.eigenvalues)}};
  doc["config"] = {{"rho", model.config.rho},
                   {"mu", model.config.mu},
                   {"radius", model.config.radius},
                   {"max_iters", model.config.max_iters},
                   {"tol_primal", model.config.tol_primal},
                   {"tol_change", model.config.tol_change}};
  doc["diagnostics"] = {{"r1", model.diagnostics.r1},
                        {"r2", model.diagnostics.r2},
                        {"objective", model.diagnostics.objective},
                        {"sigma_min", model.diagnostics.sigma_min},
                        {"converged", model.diagnostics.converged},
                        {"iterations", model.diagnostics.iterations}};

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing model file: " + path);
}

TopicModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }

  try {
    const auto k = doc.at("k").get<Eigen::Index>();
    const auto v = doc.at("v").get<Eigen::Index>();
    if (k < 1 || v < 1) throw ParseError("model: k and v must be positive");

    TopicModel model;
    model.beta = unflatten(doc.at("beta"), k, v, "beta");
    model.gamma = unflatten(doc.at("gamma"), k, k, "gamma");
    const json& sub = doc.at("subspace");
    model.subspace.mean = unflatten_vec(sub.at("mean"), v, "subspace.mean");
    model.subspace.basis = unflatten(sub.at("basis"), v, k, "subspace.basis");
    model.subspace.eigenvalues =
        unflatten_vec(sub.at("eigenvalues"), k, "subspace.eigenvalues");
    const json& cfg = doc.at("config");
    model.config.rho = cfg.at("rho").get<double>();
    model.config.mu = cfg.at("mu").get<double>();
    model.config.radius = cfg.at("radius").get<double>();
    model.config.max_iters = cfg.at("max_iters").get<int>();
    model.config.tol_primal = cfg.at("tol_primal").get<double>();
    model.config.tol_change = cfg.at("tol_change").get<double>();
    const json& diag = doc.at("diagnostics");
    model.diagnostics.r1 = diag.at("r1").get<double>();
    model.diagnostics.r2 = diag.at("r2").get<double>();
    model.diagnostics.objective = diag.at("objective").get<double>();
    model.diagnostics.sigma_min = diag.at("sigma_min").get<double>();
    model.diagnostics.converged = diag.at("converged").get<bool>();
    model.diagnostics.iterations = diag.at("iterations").get<int>();
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: schema violation: ") + e.what());
  }
}

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open csv file for writing: " + path);
  out << "# " << m.rows() << ',' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing csv file: " + path);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open csv file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: empty file: " + path);
  if (line.size() < 2 || line[0] != '#') {
    throw ParseError("csv: line 1: missing '# rows,cols' header");
  }
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  {
    std::istringstream header(line.substr(1));
    char comma = 0;
    if (!(header >> rows >> comma >> cols) || comma != ',' || rows < 0 ||
        cols < 0) {
      throw ParseError("csv: line 1: malformed '# rows,cols' header");
    }
  }

  Eigen::MatrixXd m(rows, cols);
  int line_no = 1;
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      std::ostringstream msg;
      msg << "csv: expected " << rows << " rows, file ends after "
          << line_no - 1;
      throw ParseError(msg.str());
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = 0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::size_t stop = line.find(',', start);
      const bool last = (j == cols - 1);
      if (last != (stop == std::string::npos)) {
        std::ostringstream msg;
        msg << "csv: line " << line_no << ": expected " << cols << " fields";
        throw ParseError(msg.str());
      }
      const std::string field =
          line.substr(start, last ? std::string::npos : stop - start);
      m(i, j) = parse_double(field, line_no);
      start = stop + 1;
    }
  }
  return m;
}

}  // namespace mvtm
