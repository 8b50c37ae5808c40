#pragma once

// Minimal ordered JSON tree with deterministic output: keys keep insertion
// order, doubles print with 17 significant digits, non-finite doubles print
// as the strings "inf", "-inf" or "nan".

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sispace::json {

class Value {
 public:
  using Array = std::vector<Value>;
  using Object = std::vector<std::pair<std::string, Value>>;

  Value() = default;
  Value(std::nullptr_t) {}
  Value(bool b) : data_(b) {}
  Value(double d) : data_(d) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(long long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(unsigned i) : data_(static_cast<std::int64_t>(i)) {}
  Value(unsigned long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(unsigned long long i) : data_(static_cast<std::int64_t>(i)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(Array a) : data_(std::move(a)) {}

  static Value object() {
    Value v;
    v.data_ = Object{};
    return v;
  }
  static Value array() { return Value(Array{}); }
  template <class T>
  static Value array_of(const std::vector<T>& items) {
    Array a;
    a.reserve(items.size());
    for (const auto& x : items) a.emplace_back(x);
    return Value(std::move(a));
  }

  /// Appends (or replaces) a key; the value must be an object.
  Value& set(const std::string& key, Value v);
  /// Appends to an array value.
  Value& push(Value v);

  bool is_object() const { return std::holds_alternative<Object>(data_); }
  const Object& as_object() const { return std::get<Object>(data_); }

  std::string dump(int indent = 2) const;

 private:
  void write(std::string& out, int indent, int depth) const;

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> data_{nullptr};
};

/// "%.17g" in the C locale; non-finite values map to "inf", "-inf", "nan".
std::string format_double(double v);

}  // namespace sispace::json
