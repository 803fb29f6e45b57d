#include "tmrpca/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tmrpca {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

struct RawTable {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
};

RawTable parse_table(std::istream& in) {
  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto fields = split_fields(body);
    if (!have_header) {
      for (const auto f : fields) table.labels.push_back(unquote(f));
      have_header = true;
      continue;
    }
    if (fields.size() != table.labels.size()) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << table.labels.size() << " fields, found "
          << fields.size();
      throw Error(ErrorCode::parse, msg.str());
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto f = fields[k];
      double v = 0.0;
      const auto* first = f.data();
      if (!f.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        std::ostringstream msg;
        msg << "line " << line_no << ", field " << (k + 1) << ": '" << f << "' is not a number";
        throw Error(ErrorCode::parse, msg.str());
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(ErrorCode::parse, "CSV input is empty");
  return table;
}

Matrix to_matrix(const RawTable& table) {
  const auto t = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(table.labels.size());
  Matrix m(t, p);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = table.rows[i][j];
  return m;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return in;
}

}  // namespace

TrafficMatrix parse_traffic_csv(std::istream& in, double interval_minutes,
                                std::string origin_label) {
  auto table = parse_table(in);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (std::size_t j = 0; j < table.rows[i].size(); ++j) {
      if (table.rows[i][j] < 0.0) {
        std::ostringstream msg;
        msg << "data row " << (i + 1) << ", column '" << table.labels[j]
            << "': negative traffic volume " << table.rows[i][j];
        throw Error(ErrorCode::parse, msg.str());
      }
    }
  }
  Matrix values = to_matrix(table);
  return TrafficMatrix(std::move(values), interval_minutes, std::move(table.labels), std::move(origin_label));
}

TrafficMatrix read_traffic_csv(const std::filesystem::path& path, double interval_minutes) {
  auto in = open_input(path);
  return parse_traffic_csv(in, interval_minutes, path.stem().string());
}

Matrix read_matrix_csv(const std::filesystem::path& path, std::vector<std::string>* labels) {
  auto in = open_input(path);
  auto table = parse_table(in);
  if (labels) *labels = table.labels;
  return to_matrix(table);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::numeric, "cannot format number");
  return std::string(buf, ptr);
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels, const Matrix& m) {
  if (static_cast<Eigen::Index>(labels.size()) != m.cols())
    throw Error(ErrorCode::invalid_argument, "label count does not match matrix columns");
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (j) out << ',';
    out << labels[j];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& labels,
                      const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  write_matrix_csv(out, labels, m);
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

}  // namespace tmrpca
