#pragma once

// Output rendering shared by the npset subcommands. A record is a flat
// ordered JSON object; table and csv print the same keys as json.

#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "npset/numth.hpp"

namespace npset::cli {

using Json = nlohmann::ordered_json;

enum class Format { table, json, csv };

// Integers beyond 2^53 become decimal strings so strict parsers keep them.
inline Json big(const numth::BigInt& x) {
  static const numth::BigInt limit = numth::BigInt(1) << 53;
  if (x <= limit && x >= -limit) return Json(static_cast<long long>(x));
  return Json(x.str());
}

inline Json num(numth::u64 x) { return x <= (numth::u64{1} << 53) ? Json(x) : Json(std::to_string(x)); }

inline std::string plain(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os << std::setprecision(12) << v.get<double>();
    return os.str();
  }
  return v.dump();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void emit_record(std::ostream& os, Format f, const Json& rec) {
  switch (f) {
    case Format::json:
      os << rec.dump(2) << '\n';
      break;
    case Format::csv: {
      std::string head, row;
      bool first = true;
      for (const auto& [k, v] : rec.items()) {
        head += (first ? "" : ",") + csv_field(k);
        row += (first ? "" : ",") + csv_field(plain(v));
        first = false;
      }
      os << head << '\n' << row << '\n';
      break;
    }
    case Format::table: {
      std::size_t width = 0;
      for (const auto& [k, v] : rec.items()) width = std::max(width, k.size());
      for (const auto& [k, v] : rec.items()) {
        const auto s = plain(v);
        os << std::left << std::setw(static_cast<int>(width) + 2) << k << (s.empty() ? "-" : s) << '\n';
      }
      break;
    }
  }
}

// Rows arrive one at a time; json output is assembled and printed at the end.
class RowStream {
 public:
  RowStream(std::ostream& os, Format f, Json meta) : os_(os), f_(f), doc_(std::move(meta)) {
    doc_["rows"] = Json::array();
  }

  void row(const Json& r) {
    if (f_ == Format::json) {
      doc_["rows"].push_back(r);
      return;
    }
    if (!header_done_) {
      header_done_ = true;
      std::string head;
      for (const auto& [k, v] : r.items()) {
        if (f_ == Format::csv) head += (head.empty() ? "" : ",") + csv_field(k);
        else head += pad(k);
      }
      os_ << trim_right(head) << '\n';
    }
    std::string line;
    bool first = true;
    for (const auto& [k, v] : r.items()) {
      if (f_ == Format::csv) line += (first ? "" : ",") + csv_field(plain(v));
      else line += pad(plain(v).empty() ? "-" : plain(v));
      first = false;
    }
    os_ << trim_right(line) << '\n';
    os_.flush();
  }

  void finish() {
    if (f_ == Format::json) os_ << doc_.dump(2) << '\n';
  }

 private:
  static std::string pad(const std::string& s) {
    constexpr std::size_t kWidth = 16;
    return s.size() >= kWidth ? s + "  " : s + std::string(kWidth - s.size(), ' ');
  }
  static std::string trim_right(std::string s) {
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  }

  std::ostream& os_;
  Format f_;
  Json doc_;
  bool header_done_ = false;
};

}  // namespace npset::cli
