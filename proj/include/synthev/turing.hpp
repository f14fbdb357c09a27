/* Copyright 2026 The synthev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "synthev/dataset.hpp"
#include "synthev/error.hpp"
#include "synthev/random.hpp"
#include "synthev/stats/chi_square.hpp"
#include "synthev/stats/results.hpp"

// Blinded real-vs-synthetic grading sessions backed by an append-only JSONL
// event log.
namespace synthev::turing {

inline constexpr int kEventSchemaVersion = 1;

enum class Verdict { kReal, kFake };
enum class Status { kActive, kComplete };

inline std::string_view to_string(Verdict v) {
  return v == Verdict::kReal ? "real" : "fake";
}
inline std::string_view to_string(Status s) {
  return s == Status::kActive ? "active" : "complete";
}

inline Verdict parse_verdict(std::string_view s) {
  if (s == "real") return Verdict::kReal;
  if (s == "fake") return Verdict::kFake;
  fail(ErrorKind::kValidation, "judgment label must be 'real' or 'fake'");
}

struct Item {
  std::string token;  // opaque image handle
  std::string path;
  Provenance truth = Provenance::kReal;

  friend bool operator==(const Item&, const Item&) = default;
};

struct Judgment {
  std::size_t index = 0;
  Verdict verdict = Verdict::kReal;
  std::int64_t wall_time_ms = 0;

  friend bool operator==(const Judgment&, const Judgment&) = default;
};

struct Session {
  std::string id;
  std::string grader;
  std::uint64_t seed = 0;
  std::vector<Item> items;
  std::vector<Judgment> judgments;
  Status status = Status::kActive;

  std::size_t cursor() const { return judgments.size(); }
  std::size_t total() const { return items.size(); }

  friend bool operator==(const Session&, const Session&) = default;
};

struct CreateRequest {
  std::filesystem::path real_manifest;
  std::filesystem::path synth_manifest;
  std::size_t n_real = 100;
  std::size_t n_synth = 100;
  std::optional<std::uint64_t> seed;  // default: derived from the grader name
  std::string grader;
  std::optional<std::string> id;
};

// What a grader may see about the current item. Never carries a label.
struct NextItem {
  std::string session_id;
  std::size_t index = 0;
  std::size_t total = 0;
  Status status = Status::kActive;
  std::optional<std::string> image_token;
};

struct Ack {
  std::size_t next_cursor = 0;
  Status status = Status::kActive;
  bool duplicate = false;
};

// A table with a zero marginal (e.g. every item judged correctly) has no
// chi-square; the table is still reported and the reason kept.
struct SessionReport {
  stats::ContingencyTable2x2 table;
  std::optional<stats::TestResult> chi_square;
  std::string chi_square_error;

  void compute_chi_square() {
    try {
      chi_square = stats::chi_square_2x2(table, false);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerate) throw;
      chi_square.reset();
      chi_square_error = e.what();
    }
  }
};

// Correct means real judged "real" or synthetic judged "fake".
inline stats::ContingencyTable2x2 tabulate(const Session& s) {
  stats::ContingencyTable2x2 table;
  for (const auto& j : s.judgments) {
    const Provenance truth = s.items.at(j.index).truth;
    const bool correct = (truth == Provenance::kReal) == (j.verdict == Verdict::kReal);
    table.counts[truth == Provenance::kReal ? 0 : 1][correct ? 0 : 1] += 1;
  }
  return table;
}

// FNV-1a; stable across platforms, used for per-grader default seeds.
inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

using TokenSource = std::function<std::string()>;

// 128-bit hex tokens from a nondeterministically seeded engine.
inline TokenSource random_tokens() {
  std::random_device rd;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
      static_cast<std::uint64_t>(
          std::chrono::steady_clock::now().time_since_epoch().count());
  auto rng = std::make_shared<Rng>(seed);
  return [rng] {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(32, '0');
    for (int half = 0; half < 2; ++half) {
      std::uint64_t v = rng->next_u64();
      for (int i = 0; i < 16; ++i) {
        out[static_cast<std::size_t>(half * 16 + i)] = kHex[v & 0xf];
        v >>= 4;
      }
    }
    return out;
  };
}

inline std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

class SessionStore {
 public:
  // Without a log path the store is memory-only.
  explicit SessionStore(std::optional<std::filesystem::path> log = std::nullopt,
                        TokenSource tokens = random_tokens())
      : log_path_(std::move(log)), tokens_(std::move(tokens)) {}

  // Rebuilds state from a log. An unterminated final line (a torn append)
  // is ignored; the store keeps appending to the same file.
  static SessionStore replay(const std::filesystem::path& log,
                             TokenSource tokens = random_tokens()) {
    SessionStore store(log, std::move(tokens));
    std::ifstream in(log, std::ios::binary);
    if (!in) return store;
    const std::string content{std::istreambuf_iterator<char>(in),
                              std::istreambuf_iterator<char>()};
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < content.size()) {
      const auto end = content.find('\n', start);
      if (end == std::string::npos) break;  // torn tail
      ++line_no;
      const std::string_view line(content.data() + start, end - start);
      start = end + 1;
      if (line.empty()) continue;
      nlohmann::json event;
      try {
        event = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::kFormat, log.string() + ": line " +
                                     std::to_string(line_no) + ": " + e.what());
      }
      store.apply(event);
    }
    // Drop a torn tail so later appends start on a fresh line.
    if (start < content.size()) {
      std::filesystem::resize_file(log, start);
    }
    return store;
  }

  SessionStore(SessionStore&& other) noexcept
      : log_path_(std::move(other.log_path_)),
        tokens_(std::move(other.tokens_)),
        sessions_(std::move(other.sessions_)),
        images_(std::move(other.images_)) {}

  Session create(const CreateRequest& req) {
    const DatasetManifest real_m = read_manifest(req.real_manifest);
    const DatasetManifest synth_m = read_manifest(req.synth_manifest);
    const auto reals = real_m.with_label(Provenance::kReal);
    const auto synths = synth_m.with_label(Provenance::kSynthetic);
    if (reals.size() < req.n_real || synths.size() < req.n_synth) {
      fail(ErrorKind::kValidation,
           "not enough images: requested " + std::to_string(req.n_real) +
               " real / " + std::to_string(req.n_synth) + " synthetic, have " +
               std::to_string(reals.size()) + " / " +
               std::to_string(synths.size()));
    }
    require(req.n_real + req.n_synth >= 1, "session needs at least one item");
    const std::uint64_t seed = req.seed.value_or(fnv1a(req.grader));

    struct Pick {
      std::string path;
      Provenance truth;
    };
    std::vector<Pick> picks;
    auto sample = [&](const DatasetManifest& m,
                      const std::vector<ManifestEntry>& pool, std::size_t k,
                      Provenance truth, std::uint64_t stream) {
      const auto perm = seeded_permutation(pool.size(), mix_seed(seed, stream));
      for (std::size_t i = 0; i < k; ++i) {
        const auto path = std::filesystem::absolute(m.resolve(pool[perm[i]]));
        if (!std::filesystem::exists(path)) {
          fail(ErrorKind::kIo, "no such image: " + path.string());
        }
        picks.push_back({path.lexically_normal().string(), truth});
      }
    };
    sample(real_m, reals, req.n_real, Provenance::kReal, 1);
    sample(synth_m, synths, req.n_synth, Provenance::kSynthetic, 2);
    Rng order(mix_seed(seed, 3));
    order.shuffle(picks);

    std::unique_lock lock(mutex_);
    std::string id;
    if (req.id) {
      id = *req.id;
      require(valid_id(id), "session id must match [A-Za-z0-9_-]{1,64}");
      if (sessions_.count(id)) {
        fail(ErrorKind::kConflict, "session " + id + " already exists");
      }
    } else {
      do {
        id = tokens_();
      } while (sessions_.count(id));
    }

    nlohmann::json items = nlohmann::json::array();
    for (const auto& p : picks) {
      std::string token;
      do {
        token = tokens_();
      } while (images_.count(token));
      items.push_back({{"token", token},
                       {"path", p.path},
                       {"label", std::string(synthev::to_string(p.truth))}});
    }
    const nlohmann::json event = {{"v", kEventSchemaVersion},
                                  {"type", "session_created"},
                                  {"session", id},
                                  {"grader", req.grader},
                                  {"seed", seed},
                                  {"n_real", req.n_real},
                                  {"n_synth", req.n_synth},
                                  {"items", items},
                                  {"wall_time_ms", now_ms()}};
    record(event);
    return sessions_.at(id);
  }

  NextItem next(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const Session& s = get(id);
    NextItem out;
    out.session_id = s.id;
    out.index = s.cursor();
    out.total = s.total();
    out.status = s.status;
    if (s.status == Status::kActive) out.image_token = s.items[s.cursor()].token;
    return out;
  }

  // Strict in-order grading. Resubmitting the most recently accepted index
  // is acknowledged as a duplicate and changes nothing.
  Ack submit(const std::string& id, std::size_t index, Verdict verdict) {
    std::unique_lock lock(mutex_);
    const Session& s = get(id);
    if (s.cursor() > 0 && index == s.cursor() - 1) {
      return Ack{s.cursor(), s.status, true};
    }
    if (s.status == Status::kComplete) {
      fail(ErrorKind::kState, "session " + id + " is already complete");
    }
    if (index != s.cursor()) {
      fail(ErrorKind::kSequence, "expected judgment for index " +
                                     std::to_string(s.cursor()) + ", got " +
                                     std::to_string(index));
    }
    record({{"v", kEventSchemaVersion},
            {"type", "judgment"},
            {"session", id},
            {"index", index},
            {"label", std::string(to_string(verdict))},
            {"wall_time_ms", now_ms()}});
    const Session& after = sessions_.at(id);
    if (after.status == Status::kComplete) {
      record({{"v", kEventSchemaVersion}, {"type", "completed"}, {"session", id}});
    }
    return Ack{after.cursor(), after.status, false};
  }

  SessionReport report(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const Session& s = get(id);
    if (s.status != Status::kComplete) {
      fail(ErrorKind::kState, "session " + id + " is not complete");
    }
    SessionReport r;
    r.table = tabulate(s);
    r.compute_chi_square();
    return r;
  }

  // Cell-wise sum over completed sessions.
  SessionReport aggregate(const std::vector<std::string>& ids) const {
    require(!ids.empty(), "aggregate: no session ids");
    std::shared_lock lock(mutex_);
    SessionReport r;
    for (const auto& id : ids) {
      const Session& s = get(id);
      if (s.status != Status::kComplete) {
        fail(ErrorKind::kState, "session " + id + " is not complete");
      }
      r.table += tabulate(s);
    }
    r.compute_chi_square();
    return r;
  }

  std::filesystem::path image_path(const std::string& token) const {
    std::shared_lock lock(mutex_);
    const auto it = images_.find(token);
    if (it == images_.end()) fail(ErrorKind::kNotFound, "unknown image token");
    return it->second;
  }

  std::optional<Session> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
  }

  std::map<std::string, Session> snapshot() const {
    std::shared_lock lock(mutex_);
    return sessions_;
  }

 private:
  static bool valid_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '_' || c == '-';
      if (!ok) return false;
    }
    return true;
  }

  const Session& get(const std::string& id) const {
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) fail(ErrorKind::kNotFound, "unknown session " + id);
    return it->second;
  }

  // Log first, then mutate: memory never runs ahead of the log.
  void record(const nlohmann::json& event) {
    if (log_path_) {
      std::ofstream out(*log_path_, std::ios::binary | std::ios::app);
      if (!out) fail(ErrorKind::kIo, "cannot open event log " + log_path_->string());
      const std::string line = event.dump() + "\n";
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
      out.flush();
      if (!out) fail(ErrorKind::kIo, "event log append failed");
    }
    apply(event);
  }

  void apply(const nlohmann::json& event) {
    try {
      if (event.at("v").get<int>() != kEventSchemaVersion) {
        fail(ErrorKind::kFormat, "unsupported event schema version");
      }
      const auto type = event.at("type").get<std::string>();
      const auto id = event.at("session").get<std::string>();
      if (type == "session_created") {
        Session s;
        s.id = id;
        s.grader = event.at("grader").get<std::string>();
        s.seed = event.at("seed").get<std::uint64_t>();
        for (const auto& item : event.at("items")) {
          Item it;
          it.token = item.at("token").get<std::string>();
          it.path = item.at("path").get<std::string>();
          it.truth = item.at("label").get<std::string>() == "real"
                         ? Provenance::kReal
                         : Provenance::kSynthetic;
          images_[it.token] = it.path;
          s.items.push_back(std::move(it));
        }
        if (s.items.empty()) s.status = Status::kComplete;
        sessions_[id] = std::move(s);
      } else if (type == "judgment") {
        Session& s = sessions_.at(id);
        Judgment j;
        j.index = event.at("index").get<std::size_t>();
        j.verdict = parse_verdict(event.at("label").get<std::string>());
        j.wall_time_ms = event.at("wall_time_ms").get<std::int64_t>();
        if (j.index != s.cursor() || s.status != Status::kActive) {
          fail(ErrorKind::kFormat, "event log judgment out of sequence");
        }
        s.judgments.push_back(j);
        if (s.cursor() == s.total()) s.status = Status::kComplete;
      } else if (type == "completed") {
        sessions_.at(id).status = Status::kComplete;
      } else {
        fail(ErrorKind::kFormat, "unknown event type " + type);
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kFormat, std::string("malformed event: ") + e.what());
    } catch (const std::out_of_range&) {
      fail(ErrorKind::kFormat, "event refers to an unknown session");
    }
  }

  std::optional<std::filesystem::path> log_path_;
  TokenSource tokens_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Session> sessions_;
  std::map<std::string, std::string> images_;  // token -> path
};

}  // namespace synthev::turing
