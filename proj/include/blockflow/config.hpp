#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace blockflow {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Plain-text key=value configuration. '#' starts a comment, blank lines are
// ignored, a later assignment to the same key overrides an earlier one.
class KeyValues {
 public:
  static KeyValues parse_text(const std::string& text);
  static KeyValues parse_file(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get(const std::string& key, const std::string& def = "") const;
  int64_t get_int(const std::string& key, int64_t def) const;
  double get_double(const std::string& key, double def) const;
  // Comma-separated list value; empty or missing key yields an empty list.
  std::vector<std::string> get_list(const std::string& key) const;
  const std::map<std::string, std::string>& all() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace blockflow
