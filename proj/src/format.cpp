#include "qwalk/format.hpp"

#include <charconv>
#include <stdexcept>

#include "qwalk/serialize.hpp"

namespace qwalk {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_sweep_csv(std::ostream& os, SweepVariable variable, MiStrategy strategy,
                     std::span<const SweepRecord> records) {
  os << to_string(variable) << ',' << to_string(strategy) << ",bits,error\n";
  for (const auto& r : records) {
    os << format_number(r.variable) << ',';
    if (r.result) os << format_number(r.result->normalized) << ',' << format_number(r.result->value) << ',';
    else os << ",,";
    os << csv_field(r.error) << '\n';
  }
}

Json sweep_to_json(SweepVariable variable, MiStrategy strategy, std::span<const SweepRecord> records) {
  Json rows = Json::array();
  for (const auto& r : records) {
    Json row{{"variable", r.variable}};
    row["result"] = r.result ? to_json(*r.result) : Json(nullptr);
    row["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    rows.push_back(std::move(row));
  }
  return Json{{"variable", to_string(variable)}, {"strategy", to_string(strategy)}, {"records", rows}};
}

void write_figure_csv(std::ostream& os, SweepVariable variable, std::span<const SweepRecord> ir2,
                      std::span<const SweepRecord> ir1) {
  if (ir2.size() != ir1.size()) throw std::invalid_argument("figure columns differ in length");
  const double lm05 = lm05_mutual_information().value;
  os << to_string(variable) << ",ir2,ir1,lm05\n";
  for (std::size_t i = 0; i < ir2.size(); ++i) {
    if (ir2[i].variable != ir1[i].variable) throw std::invalid_argument("figure columns use different grids");
    os << format_number(ir2[i].variable) << ',';
    os << (ir2[i].result ? format_number(ir2[i].result->normalized) : "") << ',';
    os << (ir1[i].result ? format_number(ir1[i].result->normalized) : "") << ',';
    os << format_number(lm05) << '\n';
  }
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qwalk
