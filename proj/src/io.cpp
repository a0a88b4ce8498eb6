#include "pdmp/io.hpp"

#include <charconv>
#include <ostream>

namespace pdmp {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void append_vec(std::string& line, const Vec& xs) {
  line += '[';
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) line += ',';
    line += format_double(xs[k]);
  }
  line += ']';
}

bool any_frozen(const Skeleton& skel) {
  for (const EventRecord& r : skel.records)
    for (int i = 0; i < r.z.dim(); ++i)
      if (r.z.is_frozen(i)) return true;
  return false;
}

}  // namespace

void write_skeleton_ndjson(std::ostream& os, const Skeleton& skel) {
  const bool with_frozen = any_frozen(skel);
  std::string line;
  for (const EventRecord& r : skel.records) {
    line.clear();
    line += "{\"t\":";
    line += format_double(r.t);
    line += ",\"tag\":\"";
    line += tag_name(r.tag);
    line += "\",\"region\":";
    line += std::to_string(r.z.region);
    line += ",\"x\":";
    append_vec(line, r.z.x);
    line += ",\"v\":";
    append_vec(line, r.z.v);
    if (with_frozen) {
      line += ",\"frozen\":[";
      for (int i = 0; i < r.z.dim(); ++i) {
        if (i) line += ',';
        line += r.z.is_frozen(i) ? "true" : "false";
      }
      line += ']';
    }
    line += "}\n";
    os << line;
  }
}

void write_skeleton_csv(std::ostream& os, const Skeleton& skel) {
  if (skel.records.empty()) return;
  const bool with_frozen = any_frozen(skel);
  const int d = skel.records.front().z.dim();

  std::string line = "t,tag,region";
  for (int i = 0; i < d; ++i) line += ",x" + std::to_string(i);
  for (int i = 0; i < d; ++i) line += ",v" + std::to_string(i);
  if (with_frozen)
    for (int i = 0; i < d; ++i) line += ",frozen" + std::to_string(i);
  line += '\n';
  os << line;

  for (const EventRecord& r : skel.records) {
    line.clear();
    line += format_double(r.t);
    line += ',';
    line += tag_name(r.tag);
    line += ',';
    line += std::to_string(r.z.region);
    for (double xi : r.z.x) {
      line += ',';
      line += format_double(xi);
    }
    for (double vi : r.z.v) {
      line += ',';
      line += format_double(vi);
    }
    if (with_frozen)
      for (int i = 0; i < d; ++i) {
        line += ',';
        line += r.z.is_frozen(i) ? '1' : '0';
      }
    line += '\n';
    os << line;
  }
}

void write_series_csv(std::ostream& os, const std::vector<std::string>& columns,
                      const std::vector<Vec>& rows) {
  std::string line;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) line += ',';
    line += columns[c];
  }
  line += '\n';
  os << line;
  for (const Vec& row : rows) {
    line.clear();
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ',';
      line += format_double(row[c]);
    }
    line += '\n';
    os << line;
  }
}

}  // namespace pdmp
