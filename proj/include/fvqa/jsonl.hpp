#ifndef FVQA_JSONL_HPP_
#define FVQA_JSONL_HPP_

#include <cstddef>
#include <fstream>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "fvqa/error.hpp"

namespace fvqa {

using Json = nlohmann::json;

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path + ": cannot open for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, path + ": cannot open for writing");
  return out;
}

inline Json read_json_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

// Calls fn(record, line_number) for every nonblank line. Errors raised by fn
// that are not already fvqa::Error are rewrapped with the file position; fvqa
// errors get the position prefixed.
template <class Fn>
void for_each_jsonl(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    Json record;
    try {
      record = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    try {
      fn(record, line_no);
    } catch (const Error& e) {
      throw Error(e.code(), where + ": " + e.detail());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
}

template <class Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
  auto in = open_input(path);
  for_each_jsonl(in, path, std::forward<Fn>(fn));
}

}  // namespace fvqa

#endif  // FVQA_JSONL_HPP_
