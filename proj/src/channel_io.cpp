#include "qcap/channel_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qcap::channels {

using core::Complex;
using nlohmann::json;

namespace {

json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << path << ": " << e.what();
    throw ParseError(msg.str());
  }
}

const json& require_field(const json& doc, const std::string& field,
                          const std::string& path) {
  auto it = doc.find(field);
  if (it == doc.end())
    throw ParseError(path + ": missing field '" + field + "'");
  return *it;
}

int read_count(const json& doc, const std::string& field, const std::string& path) {
  const json& j = require_field(doc, field, path);
  if (!j.is_number_integer() || j.get<long long>() < 1)
    throw ParseError(path + ": field '" + field + "' must be a positive integer");
  return j.get<int>();
}

Complex read_entry(const json& j, const std::string& where, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(path + ": " + where + " must be a two-element [re, im] array");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

core::Matrix read_matrix(const json& rows, int expect_rows, int expect_cols,
                         const std::string& where, const std::string& path) {
  if (!rows.is_array() || rows.empty())
    throw ParseError(path + ": " + where + " must be a non-empty array of rows");
  const size_t n_cols = rows[0].is_array() ? rows[0].size() : 0;
  core::Matrix m(rows.size(), n_cols);
  for (size_t r = 0; r < rows.size(); ++r) {
    const json& row = rows[r];
    std::ostringstream rw;
    rw << where << " row " << r;
    if (!row.is_array())
      throw ParseError(path + ": " + rw.str() + " must be an array");
    if (row.size() != n_cols)
      throw ParseError(path + ": " + rw.str() + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(n_cols) + " (ragged matrix)");
    for (size_t c = 0; c < row.size(); ++c) {
      std::ostringstream ew;
      ew << rw.str() << " entry " << c;
      m(r, c) = read_entry(row[c], ew.str(), path);
    }
  }
  if (expect_rows > 0 &&
      (m.rows() != expect_rows || static_cast<int>(n_cols) != expect_cols)) {
    std::ostringstream msg;
    msg << path << ": " << where << " is " << m.rows() << "x" << n_cols << ", expected "
        << expect_rows << "x" << expect_cols;
    throw ParseError(msg.str());
  }
  return m;
}

std::vector<core::Matrix> read_matrix_list(const json& doc, const std::string& field,
                                           int rows, int cols, const std::string& path) {
  const json& list = require_field(doc, field, path);
  if (!list.is_array() || list.empty())
    throw ParseError(path + ": field '" + field + "' must be a non-empty array");
  std::vector<core::Matrix> out;
  out.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    std::ostringstream where;
    where << field << "[" << i << "]";
    out.push_back(read_matrix(list[i], rows, cols, where.str(), path));
  }
  return out;
}

json matrix_to_json(const core::Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_document(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(1) << "\n";
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

QuantumChannel read_channel(const std::string& path) {
  const json doc = load_document(path);
  if (!doc.is_object()) throw ParseError(path + ": top level must be an object");
  const int d_in = read_count(doc, "d_in", path);
  const int d_out = read_count(doc, "d_out", path);
  std::string name;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string())
    name = it->get<std::string>();
  std::vector<core::Matrix> kraus = read_matrix_list(doc, "kraus", d_out, d_in, path);
  return make_channel(d_in, d_out, std::move(kraus), name);
}

void write_channel(const QuantumChannel& T, const std::string& path) {
  json doc;
  doc["name"] = T.name;
  doc["d_in"] = T.d_in;
  doc["d_out"] = T.d_out;
  json list = json::array();
  for (const core::Matrix& k : T.kraus) list.push_back(matrix_to_json(k));
  doc["kraus"] = std::move(list);
  save_document(doc, path);
}

measures::MeasurementKrausSet read_measurement(const std::string& path) {
  const json doc = load_document(path);
  if (!doc.is_object()) throw ParseError(path + ": top level must be an object");
  const int dim = read_count(doc, "dim", path);
  std::string name;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string())
    name = it->get<std::string>();
  std::vector<core::Matrix> kraus = read_matrix_list(doc, "povm_kraus", dim, dim, path);
  return measures::make_measurement(dim, std::move(kraus), name);
}

void write_measurement(const measures::MeasurementKrausSet& m, const std::string& path) {
  json doc;
  doc["name"] = m.name;
  doc["dim"] = m.dim;
  json list = json::array();
  for (const core::Matrix& k : m.kraus) list.push_back(matrix_to_json(k));
  doc["povm_kraus"] = std::move(list);
  save_document(doc, path);
}

}  // namespace qcap::channels
