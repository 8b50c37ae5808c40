#include "sispace/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sispace::json {
namespace {

void write_string(std::string& out, const std::string& s) {
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void newline(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Value& Value::set(const std::string& key, Value v) {
  auto* obj = std::get_if<Object>(&data_);
  if (!obj) throw std::logic_error("json: set on a non-object");
  for (auto& [k, existing] : *obj) {
    if (k == key) {
      existing = std::move(v);
      return existing;
    }
  }
  obj->emplace_back(key, std::move(v));
  return obj->back().second;
}

Value& Value::push(Value v) {
  auto* arr = std::get_if<Array>(&data_);
  if (!arr) throw std::logic_error("json: push on a non-array");
  arr->push_back(std::move(v));
  return arr->back();
}

std::string Value::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  if (indent > 0) out += '\n';
  return out;
}

void Value::write(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(data_)) {
    out += "null";
  } else if (const auto* b = std::get_if<bool>(&data_)) {
    out += *b ? "true" : "false";
  } else if (const auto* i = std::get_if<std::int64_t>(&data_)) {
    out += std::to_string(*i);
  } else if (const auto* d = std::get_if<double>(&data_)) {
    if (std::isfinite(*d)) {
      out += format_double(*d);
    } else {
      write_string(out, format_double(*d));
    }
  } else if (const auto* s = std::get_if<std::string>(&data_)) {
    write_string(out, *s);
  } else if (const auto* a = std::get_if<Array>(&data_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    // arrays of scalars stay on one line
    bool flat = true;
    for (const auto& e : *a) {
      if (std::holds_alternative<Array>(e.data_) || std::holds_alternative<Object>(e.data_)) flat = false;
    }
    out += '[';
    for (std::size_t k = 0; k < a->size(); ++k) {
      if (k) out += flat ? ", " : ",";
      if (!flat) newline(out, indent, depth + 1);
      (*a)[k].write(out, indent, depth + 1);
    }
    if (!flat) newline(out, indent, depth);
    out += ']';
  } else {
    const auto& o = std::get<Object>(data_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t k = 0; k < o.size(); ++k) {
      if (k) out += ',';
      newline(out, indent, depth + 1);
      write_string(out, o[k].first);
      out += indent > 0 ? ": " : ":";
      o[k].second.write(out, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += '}';
  }
}

}  // namespace sispace::json
