/*
 * Copyright 2026 The dsdevs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsdevs/error.hpp"
#include "dsdevs/value.hpp"

namespace dsdevs {

// Path from the root coupled model down to a component. The root itself is
// the empty path and renders as "/". Paths compare by their rendering, so a
// flattened component named "a/b" and the nested path a -> b are the same key.
class ModelPath {
 public:
  ModelPath() = default;
  explicit ModelPath(std::vector<std::string> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_) {
      if (s.empty()) throw UsageError("empty model path segment");
    }
  }
  ModelPath(std::initializer_list<std::string> segments)
      : ModelPath(std::vector<std::string>(segments)) {}

  static ModelPath root() { return {}; }

  // "/" or "/a/b". Leading slash is required.
  static ModelPath parse(std::string_view text) {
    if (text.empty() || text.front() != '/') {
      throw UsageError("model path must start with '/': '" + std::string(text) + "'");
    }
    std::vector<std::string> segs;
    std::size_t pos = 1;
    while (pos < text.size()) {
      std::size_t next = text.find('/', pos);
      if (next == std::string_view::npos) next = text.size();
      segs.emplace_back(text.substr(pos, next - pos));
      pos = next + 1;
    }
    return ModelPath(std::move(segs));
  }

  bool is_root() const { return segments_.empty(); }
  const std::vector<std::string>& segments() const { return segments_; }
  const std::string& name() const {
    if (segments_.empty()) throw UsageError("the root path has no name");
    return segments_.back();
  }

  ModelPath parent() const {
    if (segments_.empty()) throw UsageError("the root path has no parent");
    return ModelPath(std::vector<std::string>(segments_.begin(), segments_.end() - 1));
  }

  ModelPath child(std::string name) const {
    auto segs = segments_;
    segs.push_back(std::move(name));
    return ModelPath(std::move(segs));
  }

  std::string str() const {
    if (segments_.empty()) return "/";
    std::string out;
    for (const auto& s : segments_) out += "/" + s;
    return out;
  }

  // Name used for this component once the hierarchy is flattened.
  std::string joined() const {
    std::string out;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (i) out += '/';
      out += segments_[i];
    }
    return out;
  }

  friend bool operator==(const ModelPath& a, const ModelPath& b) { return a.str() == b.str(); }
  friend std::strong_ordering operator<=>(const ModelPath& a, const ModelPath& b) {
    return a.str() <=> b.str();
  }

 private:
  std::vector<std::string> segments_;
};

enum class Direction { In, Out };

inline std::string_view to_string(Direction d) { return d == Direction::In ? "in" : "out"; }

struct PortSpec {
  std::string name;
  Direction direction = Direction::In;
  ValueType type;

  std::string str() const {
    return std::string(to_string(direction)) + " " + name + ":" + type.str();
  }
  friend bool operator==(const PortSpec&, const PortSpec&) = default;
};

struct Message {
  std::string port;
  Value value;

  std::string str() const { return port + "=" + value.str(); }
  friend bool operator==(const Message&, const Message&) = default;
};

// Multiset of simultaneous messages. Equality ignores order but not multiplicity.
class Bag {
 public:
  Bag() = default;
  Bag(std::initializer_list<Message> msgs) : messages_(msgs) {}
  explicit Bag(std::vector<Message> msgs) : messages_(std::move(msgs)) {}

  void add(Message m) { messages_.push_back(std::move(m)); }
  void add(std::string port, Value v) { messages_.push_back({std::move(port), std::move(v)}); }
  void append(const Bag& other) {
    messages_.insert(messages_.end(), other.messages_.begin(), other.messages_.end());
  }

  bool empty() const { return messages_.empty(); }
  std::size_t size() const { return messages_.size(); }
  auto begin() const { return messages_.begin(); }
  auto end() const { return messages_.end(); }
  const std::vector<Message>& messages() const { return messages_; }

  std::size_t count(std::string_view port) const {
    return static_cast<std::size_t>(std::count_if(
        messages_.begin(), messages_.end(), [&](const Message& m) { return m.port == port; }));
  }

  std::vector<Value> on(std::string_view port) const {
    std::vector<Value> out;
    for (const auto& m : messages_) {
      if (m.port == port) out.push_back(m.value);
    }
    return out;
  }

  // Canonical order: by port, then by value rendering. Behaviors always
  // receive bags in this order so simultaneous inputs are processed
  // identically regardless of how they were routed.
  Bag canonical() const {
    std::vector<std::pair<std::string, const Message*>> keyed;
    keyed.reserve(messages_.size());
    for (const auto& m : messages_) keyed.emplace_back(m.port + '\x1f' + m.value.str(), &m);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Bag out;
    for (const auto& [k, m] : keyed) out.add(*m);
    return out;
  }

  friend bool operator==(const Bag& a, const Bag& b) {
    if (a.size() != b.size()) return false;
    return a.canonical().messages_ == b.canonical().messages_;
  }

 private:
  std::vector<Message> messages_;
};

}  // namespace dsdevs
