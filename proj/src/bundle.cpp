// Copyright 2026 The axtract Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "axtract/error.hpp"
#include "axtract/source.hpp"

namespace axtract {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string gunzip(const std::string& data) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) {
    throw Error(ErrorCode::kUnreadableArchive, "zlib initialisation failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[1 << 15];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kUnreadableArchive, "corrupt gzip stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kUnreadableArchive, "truncated gzip stream");
    }
  }
  inflateEnd(&zs);
  return out;
}

std::size_t parse_octal(std::string_view field) {
  std::size_t v = 0;
  for (char c : field) {
    if (c == '\0' || c == ' ') {
      if (v) break;
      continue;
    }
    if (c < '0' || c > '7') throw Error(ErrorCode::kUnreadableArchive, "bad tar size field");
    v = v * 8 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

std::string c_field(std::string_view block, std::size_t off, std::size_t len) {
  std::string_view f = block.substr(off, len);
  return std::string(f.substr(0, std::min(f.find('\0'), f.size())));
}

std::string normalize_member(std::string name) {
  while (name.starts_with("./")) name.erase(0, 2);
  return fs::path(name).lexically_normal().generic_string();
}

// POSIX ustar with GNU long names and pax "path" records.
std::map<std::string, std::string> untar(const std::string& data) {
  std::map<std::string, std::string> files;
  std::size_t off = 0;
  std::string long_name;
  while (off + 512 <= data.size()) {
    std::string_view block(data.data() + off, 512);
    if (block.find_first_not_of('\0') == std::string_view::npos) break;
    std::string name = c_field(block, 0, 100);
    std::size_t size = parse_octal(block.substr(124, 12));
    char type = block[156];
    std::string prefix = c_field(block, 345, 155);
    if (block.substr(257, 5) == "ustar" && !prefix.empty()) name = prefix + "/" + name;
    off += 512;
    if (off + size > data.size()) throw Error(ErrorCode::kUnreadableArchive, "truncated tar member");
    std::string body = data.substr(off, size);
    off += (size + 511) / 512 * 512;
    if (type == 'L') {
      long_name = body.substr(0, body.find('\0'));
      continue;
    }
    if (type == 'x') {
      std::istringstream records(body);
      std::string rec;
      while (std::getline(records, rec)) {
        auto p = rec.find(" path=");
        if (p != std::string::npos) long_name = rec.substr(p + 6);
      }
      continue;
    }
    if (!long_name.empty()) {
      name = long_name;
      long_name.clear();
    }
    if (type == '0' || type == '\0' || type == '7') {
      files[normalize_member(name)] = std::move(body);
    }
  }
  return files;
}

std::string strip_archive_suffix(std::string name) {
  for (std::string_view suffix : {".tar.gz", ".tgz", ".tar", ".gz", ".tex"}) {
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      return name.substr(0, name.size() - suffix.size());
    }
  }
  return name;
}

}  // namespace

std::string choose_main_file(const std::map<std::string, std::string>& files) {
  std::vector<std::string> with_document;
  std::vector<std::string> with_class;
  for (const auto& [path, content] : files) {
    if (content.find("\\begin{document}") == std::string::npos) continue;
    with_document.push_back(path);
    if (content.find("\\documentclass") != std::string::npos) with_class.push_back(path);
  }
  const auto& pool = with_class.empty() ? with_document : with_class;
  if (pool.empty()) throw Error(ErrorCode::kNoMainFile, "no file contains a document environment");
  return *std::min_element(pool.begin(), pool.end());
}

PaperSource load_bundle(const fs::path& path) {
  PaperSource src;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), path).generic_string();
      src.files[rel] = read_file(entry.path());
    }
    src.paper_id = path.filename().empty() ? path.parent_path().filename().string()
                                           : path.filename().string();
  } else if (fs::is_regular_file(path, ec)) {
    std::string data = read_file(path);
    std::string name = path.filename().string();
    src.paper_id = strip_archive_suffix(name);
    bool gz = data.size() >= 2 && static_cast<unsigned char>(data[0]) == 0x1f &&
              static_cast<unsigned char>(data[1]) == 0x8b;
    if (gz) data = gunzip(data);
    bool tar = data.size() >= 512 && data.compare(257, 5, "ustar") == 0;
    if (tar) {
      src.files = untar(data);
    } else if (name.ends_with(".tex") || (gz && !name.ends_with(".tar.gz") && !name.ends_with(".tgz"))) {
      std::string member = name.ends_with(".gz") ? name.substr(0, name.size() - 3) : name;
      if (!member.ends_with(".tex")) member += ".tex";
      src.files[member] = std::move(data);
    } else {
      throw Error(ErrorCode::kUnreadableArchive, "not a tar archive: " + path.string());
    }
  } else {
    throw Error(ErrorCode::kIo, "no such bundle: " + path.string());
  }
  if (src.paper_id.empty()) src.paper_id = "paper";
  src.main_file = choose_main_file(src.files);
  return src;
}

}  // namespace axtract
