#include "miner/profile_io.hpp"

#include <fstream>
#include <sstream>

#include "miner/error.hpp"

namespace miner {

namespace csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += escape(fields[i]);
  }
  out += '\n';
  return out;
}

std::vector<std::string> parse_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("CSV has no column '" + std::string(name) + "'");
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open " + path.string());
  Table table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = parse_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(path.string() + ": row " + std::to_string(table.rows.size() + 2) + " has " +
                       std::to_string(fields.size()) + " fields, expected " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (first) throw ParseError(path.string() + ": empty CSV");
  return table;
}

void write(const std::filesystem::path& path, const Table& table) {
  std::string text = row(table.header);
  for (const auto& r : table.rows) text += row(r);
  write_file(path, text);
}

std::optional<double> parse_optional(std::string_view field) {
  if (field.empty()) return std::nullopt;
  return parse_number(field);
}

double parse_number(std::string_view field) {
  double value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("not a number: '" + std::string(field) + "'");
  }
  return value;
}

long long parse_integer(std::string_view field) {
  long long value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ParseError("not an integer: '" + std::string(field) + "'");
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace csv

namespace {

constexpr const char* kSubcategoryColumns[kSelfieKinds] = {"indoor_occurrences", "outdoor_occurrences",
                                                           "holding_occurrences", "facemask_occurrences"};

}  // namespace

csv::Table profiles_table(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy) {
  csv::Table table;
  table.header.push_back("user_id");
  for (const auto& c : taxonomy.categories) table.header.push_back(c);
  table.header.push_back("I");
  table.header.push_back("S");
  for (std::size_t m = 0; m < kSelfieMeasures; ++m) table.header.push_back(to_string(static_cast<SelfieMeasure>(m)));
  table.header.push_back("sparse");
  table.header.push_back("total_occurrences");
  table.header.push_back("selfie_occurrences");
  for (const auto* name : kSubcategoryColumns) table.header.push_back(name);
  table.header.push_back("one_face_occurrences");
  table.header.push_back("multi_face_occurrences");

  for (const auto& p : profiles) {
    if (static_cast<std::size_t>(p.freq.size()) != taxonomy.size()) {
      throw ArgumentError("profile " + p.user_id + " does not match the taxonomy size");
    }
    std::vector<std::string> r;
    r.reserve(table.header.size());
    r.push_back(p.user_id);
    for (Eigen::Index i = 0; i < p.freq.size(); ++i) r.push_back(csv::number(p.freq(i)));
    r.push_back(csv::number(p.inertia));
    r.push_back(csv::number(p.singleness));
    for (const auto& m : p.selfie) r.push_back(csv::number(m));
    r.push_back(p.sparse ? "1" : "0");
    r.push_back(std::to_string(p.total_occurrences));
    r.push_back(std::to_string(p.selfie_occurrences));
    for (const auto n : p.subcategory_occurrences) r.push_back(std::to_string(n));
    r.push_back(std::to_string(p.one_face_occurrences));
    r.push_back(std::to_string(p.multi_face_occurrences));
    table.rows.push_back(std::move(r));
  }
  return table;
}

std::vector<UserProfile> profiles_from_table(const csv::Table& table, const Taxonomy& taxonomy) {
  const std::size_t expected = 1 + taxonomy.size() + 2 + kSelfieMeasures + 3 + kSelfieKinds + 2;
  if (table.header.size() != expected) {
    throw SchemaError("profile CSV has " + std::to_string(table.header.size()) + " columns, expected " +
                      std::to_string(expected) + " for this taxonomy");
  }
  for (std::size_t i = 0; i < taxonomy.size(); ++i) {
    if (table.header[1 + i] != taxonomy.categories[i]) {
      throw SchemaError("profile CSV column '" + table.header[1 + i] + "' does not match taxonomy category '" +
                        taxonomy.categories[i] + "'");
    }
  }
  std::vector<UserProfile> profiles;
  profiles.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    std::size_t col = 0;
    UserProfile p;
    p.user_id = r[col++];
    p.freq.resize(static_cast<Eigen::Index>(taxonomy.size()));
    for (std::size_t i = 0; i < taxonomy.size(); ++i) p.freq(static_cast<Eigen::Index>(i)) = csv::parse_number(r[col++]);
    p.inertia = csv::parse_optional(r[col++]);
    p.singleness = csv::parse_optional(r[col++]);
    for (auto& m : p.selfie) m = csv::parse_optional(r[col++]);
    p.sparse = r[col++] == "1";
    p.total_occurrences = csv::parse_integer(r[col++]);
    p.selfie_occurrences = csv::parse_integer(r[col++]);
    for (auto& n : p.subcategory_occurrences) n = csv::parse_integer(r[col++]);
    p.one_face_occurrences = csv::parse_integer(r[col++]);
    p.multi_face_occurrences = csv::parse_integer(r[col++]);
    profiles.push_back(std::move(p));
  }
  return profiles;
}

void save_profiles(const std::vector<UserProfile>& profiles, const Taxonomy& taxonomy,
                   const std::filesystem::path& path) {
  csv::write(path, profiles_table(profiles, taxonomy));
}

std::vector<UserProfile> load_profiles(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  return profiles_from_table(csv::read(path), taxonomy);
}

}  // namespace miner
