#pragma once

#include <string>
#include <vector>

namespace agex {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Non-empty, non-comment lines of a plain-text config file. '#' starts a
// comment only at the beginning of a (trimmed) line. Returns (line_no, text).
std::vector<std::pair<int, std::string>> config_lines(const std::string& content);

// Minimal CSV field splitter with double-quote support ("a,b" stays one field).
std::vector<std::string> split_csv_line(const std::string& line);

// Splits on a delimiter, trimming each piece. Empty pieces are kept.
std::vector<std::string> split_trim(const std::string& s, char delim);

}  // namespace agex
