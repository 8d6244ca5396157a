//  Copyright 2026 The shh Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

// Delimited-text ingestion with per-column dictionary encoding, and a
// replayable stream handle for the multi-pass algorithms.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "shh/core.hpp"

namespace shh {

struct Schema {
  char delimiter = ',';
  bool has_header = false;
  /// 0-based column holding the class coordinate, if any.
  std::optional<std::size_t> class_col;
};

/// Injective token <-> code map for one column. Codes are assigned in
/// first-seen order starting at 0.
class Dictionary {
 public:
  Code encode(std::string_view token) {
    if (auto it = index_.find(std::string(token)); it != index_.end()) return it->second;
    Code code = static_cast<Code>(tokens_.size());
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), code);
    return code;
  }

  std::optional<Code> find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& decode(Code code) const {
    if (code >= tokens_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "code " + std::to_string(code) + " not in dictionary");
    }
    return tokens_[code];
  }

  std::size_t size() const noexcept { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Code> index_;
};

struct PassSummary {
  Count m = 0;
  /// Distinct values observed per feature coordinate during this pass.
  std::vector<std::size_t> distinct;
};

namespace detail {

inline void split_line(std::string_view line, char delim, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

/// Replayable dataset. Either backed by delimited text (a file or an
/// in-memory buffer) or by already-coded items.
///
/// Text sources are read once when opened; that read builds and then freezes
/// the dictionaries. Every later replay must reproduce the same tokens and
/// row count, otherwise IngestInconsistency is raised.
class Dataset {
 public:
  static Dataset open(const std::filesystem::path& path, Schema schema) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw Error(ErrorCode::kIo, "cannot open " + path.string());
    }
    Dataset ds;
    ds.source_ = FileSource{path};
    ds.origin_ = path;
    ds.schema_ = schema;
    ds.first_read();
    return ds;
  }

  static Dataset from_text(std::string text, Schema schema) {
    Dataset ds;
    ds.source_ = TextSource{std::make_shared<const std::string>(std::move(text))};
    ds.schema_ = schema;
    ds.first_read();
    return ds;
  }

  /// Coded items, optionally with one class code per item. Cardinality of a
  /// coordinate is one past its largest code.
  static Dataset from_items(std::vector<Item> items,
                            std::optional<std::vector<Code>> classes = std::nullopt) {
    if (items.empty()) throw Error(ErrorCode::kEmptyFile, "no items");
    if (classes && classes->size() != items.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "class vector length differs from item count");
    }
    Dataset ds;
    ds.d_ = items.front().size();
    if (ds.d_ == 0) throw Error(ErrorCode::kEmptyFile, "items have no coordinates");
    ds.cardinalities_.assign(ds.d_, 0);
    for (const Item& it : items) {
      if (it.size() != ds.d_) throw Error(ErrorCode::kRaggedRow, "items differ in length");
      for (std::size_t j = 0; j < ds.d_; ++j) {
        ds.cardinalities_[j] = std::max<std::size_t>(ds.cardinalities_[j], it.values[j] + 1);
      }
    }
    if (classes) {
      ds.schema_.class_col = ds.d_;
      for (Code z : *classes) ds.class_cardinality_ = std::max<std::size_t>(ds.class_cardinality_, z + 1);
    }
    ds.m_ = items.size();
    ds.source_ = CodedSource{std::make_shared<const std::vector<Item>>(std::move(items)),
                             classes ? std::make_shared<const std::vector<Code>>(std::move(*classes))
                                     : nullptr};
    return ds;
  }

  /// Feature dimensionality (class column excluded).
  std::size_t d() const noexcept { return d_; }
  Count m() const noexcept { return m_; }
  bool has_class() const noexcept { return schema_.class_col.has_value(); }
  const Schema& schema() const noexcept { return schema_; }
  bool is_text() const noexcept { return !std::holds_alternative<CodedSource>(source_); }

  /// File the dataset was opened from; kept by buffered() copies.
  const std::optional<std::filesystem::path>& path() const noexcept { return origin_; }

  /// n_j per feature coordinate.
  const std::vector<std::size_t>& cardinalities() const noexcept { return cardinalities_; }
  std::size_t class_cardinality() const noexcept { return class_cardinality_; }

  const Dictionary& dictionary(std::size_t coord) const { return dictionaries_.at(coord); }
  const Dictionary& class_dictionary() const { return class_dictionary_; }
  bool has_dictionaries() const noexcept { return !dictionaries_.empty(); }

  /// Feature coordinate -> column index in the source text.
  std::size_t column_of(std::size_t coord) const {
    if (schema_.class_col && coord >= *schema_.class_col) return coord + 1;
    return coord;
  }

  /// Calls `visit(item)` or `visit(item, class_code)` once per record in
  /// source order. `class_code` is std::optional<Code>, empty without a class
  /// column.
  template <typename Visitor>
  PassSummary replay(Visitor&& visit) const {
    PassSummary summary;
    std::vector<std::vector<bool>> seen(d_);
    for (std::size_t j = 0; j < d_; ++j) seen[j].assign(cardinalities_[j], false);
    summary.distinct.assign(d_, 0);
    auto deliver = [&](const Item& item, std::optional<Code> cls) {
      for (std::size_t j = 0; j < d_; ++j) {
        Code c = item.values[j];
        if (!seen[j][c]) {
          seen[j][c] = true;
          ++summary.distinct[j];
        }
      }
      ++summary.m;
      if constexpr (std::is_invocable_v<Visitor&, const Item&, std::optional<Code>>) {
        visit(item, cls);
      } else {
        visit(item);
      }
    };

    if (auto* coded = std::get_if<CodedSource>(&source_)) {
      const auto& items = *coded->items;
      for (std::size_t i = 0; i < items.size(); ++i) {
        std::optional<Code> cls;
        if (coded->classes) cls = (*coded->classes)[i];
        deliver(items[i], cls);
      }
    } else {
      Item item;
      item.values.resize(d_);
      for_each_row([&](const std::vector<std::string_view>& fields, std::size_t line_no) {
        std::optional<Code> cls;
        for (std::size_t col = 0; col < fields.size(); ++col) {
          bool is_class = schema_.class_col && col == *schema_.class_col;
          const Dictionary& dict = is_class ? class_dictionary_ : dictionaries_[coord_of(col)];
          auto code = dict.find(fields[col]);
          if (!code) {
            throw Error(ErrorCode::kIngestInconsistency,
                        "line " + std::to_string(line_no) + ": token absent from pass-1 dictionary");
          }
          if (is_class) {
            cls = *code;
          } else {
            item.values[coord_of(col)] = *code;
          }
        }
        deliver(item, cls);
      });
    }
    if (summary.m != m_) {
      throw Error(ErrorCode::kIngestInconsistency,
                  "replay produced " + std::to_string(summary.m) + " items, expected " +
                      std::to_string(m_));
    }
    return summary;
  }

  /// Coded in-memory copy of a text dataset. Dictionaries are carried over so
  /// codes stay decodable.
  Dataset buffered() const {
    if (std::holds_alternative<CodedSource>(source_)) return *this;
    std::vector<Item> items;
    std::vector<Code> classes;
    items.reserve(m_);
    replay([&](const Item& item, std::optional<Code> cls) {
      items.push_back(item);
      if (cls) classes.push_back(*cls);
    });
    Dataset ds = *this;
    ds.source_ = CodedSource{
        std::make_shared<const std::vector<Item>>(std::move(items)),
        has_class() ? std::make_shared<const std::vector<Code>>(std::move(classes)) : nullptr};
    return ds;
  }

  /// Decodes a joint value of subcube `t` to its original tokens. Coded
  /// datasets render codes as decimal strings.
  std::vector<std::string> decode(const Subcube& t, const JointValue& v) const {
    std::vector<std::string> out;
    out.reserve(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (has_dictionaries()) {
        out.push_back(dictionaries_[t[j]].decode(v[j]));
      } else {
        out.push_back(std::to_string(v[j]));
      }
    }
    return out;
  }

  /// Inverse of decode; fails with InvalidArgument for unknown tokens.
  JointValue encode(const Subcube& t, const std::vector<std::string>& tokens) const {
    if (tokens.size() != t.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "value arity differs from subcube size");
    }
    JointValue v;
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (has_dictionaries()) {
        auto code = dictionaries_[t[j]].find(tokens[j]);
        // Unknown tokens never occur in the stream; map them past the
        // dictionary so queries answer NO.
        v.values.push_back(code ? *code : static_cast<Code>(dictionaries_[t[j]].size()));
      } else {
        v.values.push_back(static_cast<Code>(std::stoul(tokens[j])));
      }
    }
    return v;
  }

 private:
  struct FileSource {
    std::filesystem::path path;
  };
  struct TextSource {
    std::shared_ptr<const std::string> text;
  };
  struct CodedSource {
    std::shared_ptr<const std::vector<Item>> items;
    std::shared_ptr<const std::vector<Code>> classes;
  };

  Dataset() = default;

  std::size_t coord_of(std::size_t col) const {
    if (schema_.class_col && col > *schema_.class_col) return col - 1;
    return col;
  }

  template <typename RowFn>
  void for_each_row(RowFn&& on_row) const {
    std::unique_ptr<std::istream> owned;
    if (auto* f = std::get_if<FileSource>(&source_)) {
      auto file = std::make_unique<std::ifstream>(f->path, std::ios::binary);
      if (!*file) throw Error(ErrorCode::kIo, "cannot open " + f->path.string());
      owned = std::move(file);
    } else {
      owned = std::make_unique<std::istringstream>(*std::get<TextSource>(source_).text);
    }
    std::istream& in = *owned;
    std::string line;
    std::vector<std::string_view> fields;
    std::size_t line_no = 0;
    bool header_pending = schema_.has_header;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (header_pending) {
        header_pending = false;
        continue;
      }
      detail::split_line(line, schema_.delimiter, fields);
      if (columns_ != 0 && fields.size() != columns_) {
        throw Error(ErrorCode::kRaggedRow, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(columns_));
      }
      on_row(fields, line_no);
    }
    if (in.bad()) throw Error(ErrorCode::kIo, "read failure");
  }

  void first_read() {
    columns_ = 0;
    // Peek the first data row to learn the column count.
    {
      std::unique_ptr<std::istream> owned;
      if (auto* f = std::get_if<FileSource>(&source_)) {
        owned = std::make_unique<std::ifstream>(f->path, std::ios::binary);
      } else {
        owned = std::make_unique<std::istringstream>(*std::get<TextSource>(source_).text);
      }
      std::string line;
      bool header_pending = schema_.has_header;
      std::vector<std::string_view> fields;
      while (std::getline(*owned, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (header_pending) {
          header_pending = false;
          continue;
        }
        detail::split_line(line, schema_.delimiter, fields);
        columns_ = fields.size();
        break;
      }
    }
    if (columns_ == 0) throw Error(ErrorCode::kEmptyFile, "no data rows");
    if (schema_.class_col && *schema_.class_col >= columns_) {
      throw Error(ErrorCode::kIndexOutOfRange, "class column beyond the row width");
    }
    d_ = schema_.class_col ? columns_ - 1 : columns_;
    if (d_ == 0) throw Error(ErrorCode::kEmptyFile, "no feature columns");
    dictionaries_.assign(d_, Dictionary{});
    m_ = 0;
    for_each_row([&](const std::vector<std::string_view>& fields, std::size_t) {
      for (std::size_t col = 0; col < fields.size(); ++col) {
        if (schema_.class_col && col == *schema_.class_col) {
          class_dictionary_.encode(fields[col]);
        } else {
          dictionaries_[coord_of(col)].encode(fields[col]);
        }
      }
      ++m_;
    });
    cardinalities_.resize(d_);
    for (std::size_t j = 0; j < d_; ++j) cardinalities_[j] = dictionaries_[j].size();
    class_cardinality_ = class_dictionary_.size();
  }

  std::variant<FileSource, TextSource, CodedSource> source_;
  std::optional<std::filesystem::path> origin_;
  Schema schema_;
  std::size_t columns_ = 0;
  std::size_t d_ = 0;
  Count m_ = 0;
  std::vector<Dictionary> dictionaries_;
  Dictionary class_dictionary_;
  std::vector<std::size_t> cardinalities_;
  std::size_t class_cardinality_ = 0;
};

inline Dataset open_dataset(const std::filesystem::path& path, Schema schema = {}) {
  return Dataset::open(path, schema);
}

}  // namespace shh
