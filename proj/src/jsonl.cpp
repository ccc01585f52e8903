#include "rgqa/jsonl.hpp"

#include <fstream>
#include <stdexcept>

namespace rgqa {

void for_each_jsonl(const std::string& path,
                    const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": malformed line: " + e.what());
    }
    fn(lineno, parsed);
  }
}

const nlohmann::json& require_field(const nlohmann::json& obj,
                                    const std::string& key,
                                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw std::runtime_error(where + ": missing field '" + key + "'");
  return *it;
}

}  // namespace rgqa
