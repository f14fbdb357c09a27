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

#include <httplib.h>
#include <json.hpp>

// <resolv.h>, pulled in by httplib, defines `_res` as a macro, which breaks
// Eigen headers included later in the same translation unit.
#ifdef _res
#undef _res
#endif

#include <string>
#include <vector>

#include "synthev/csv.hpp"
#include "synthev/error.hpp"
#include "synthev/json_io.hpp"
#include "synthev/png_io.hpp"
#include "synthev/turing.hpp"

namespace synthev::turing {

inline int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kConflict:
    case ErrorKind::kSequence:
    case ErrorKind::kState: return 409;
    case ErrorKind::kIo:
    case ErrorKind::kFormat:
    case ErrorKind::kNumeric: return 500;
    default: return 400;
  }
}

inline nlohmann::json to_json(const NextItem& next) {
  nlohmann::json j = {{"session_id", next.session_id},
                      {"index", next.index},
                      {"total", next.total},
                      {"status", std::string(to_string(next.status))}};
  if (next.image_token) {
    j["image_token"] = *next.image_token;
    j["image_url"] = "/images/" + *next.image_token;
  } else {
    j["image_token"] = nullptr;
    j["image_url"] = nullptr;
  }
  return j;
}

inline nlohmann::json to_json(const SessionReport& r) {
  nlohmann::json j = {{"table", r.table}, {"chi_square", nullptr}};
  if (r.chi_square) {
    j["chi_square"] = *r.chi_square;
  } else {
    j["chi_square_error"] = r.chi_square_error;
  }
  return j;
}

namespace detail {

inline void send_json(httplib::Response& res, int status,
                      const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, ErrorKind kind,
                       const std::string& message) {
  send_json(res, http_status(kind),
            {{"error", std::string(synthev::to_string(kind))},
             {"message", message}});
}

// Runs a handler, translating library errors into JSON error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, ErrorKind::kValidation,
               std::string("bad request body: ") + e.what());
  }
}

inline nlohmann::json parse_body(const httplib::Request& req) {
  auto body = nlohmann::json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    fail(ErrorKind::kValidation, "request body must be a JSON object");
  }
  return body;
}

}  // namespace detail

// Registers the grading API on `server`. The store must outlive the server.
//   POST /sessions                    create a session
//   GET  /sessions/{id}/next          current image token and index
//   POST /sessions/{id}/judgments     {"index": i, "label": "real"|"fake"}
//   GET  /sessions/{id}/report        2x2 table and chi-square (complete only)
//   GET  /report/aggregate?ids=a,b    cell-wise sum over sessions
//   GET  /images/{token}              PNG bytes
inline void mount_routes(httplib::Server& server, SessionStore& store) {
  server.Post("/sessions", [&store](const httplib::Request& req,
                                    httplib::Response& res) {
    detail::guarded(res, [&] {
      const auto body = detail::parse_body(req);
      CreateRequest cr;
      cr.real_manifest = body.at("real_manifest").get<std::string>();
      cr.synth_manifest = body.at("synth_manifest").get<std::string>();
      cr.n_real = body.value("n_real", std::size_t{100});
      cr.n_synth = body.value("n_synth", std::size_t{100});
      if (body.contains("seed")) cr.seed = body.at("seed").get<std::uint64_t>();
      cr.grader = body.value("grader", std::string{});
      if (body.contains("id")) cr.id = body.at("id").get<std::string>();
      const Session s = store.create(cr);
      detail::send_json(res, 201,
                        {{"session_id", s.id},
                         {"total", s.total()},
                         {"cursor", s.cursor()},
                         {"status", std::string(to_string(s.status))}});
    });
  });

  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/next)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               detail::guarded(res, [&] {
                 detail::send_json(res, 200, to_json(store.next(req.matches[1])));
               });
             });

  server.Post(R"(/sessions/([A-Za-z0-9_-]+)/judgments)",
              [&store](const httplib::Request& req, httplib::Response& res) {
                detail::guarded(res, [&] {
                  const auto body = detail::parse_body(req);
                  const auto index = body.at("index").get<std::int64_t>();
                  require(index >= 0, "index must be >= 0");
                  const Verdict v =
                      parse_verdict(body.at("label").get<std::string>());
                  const Ack ack = store.submit(
                      req.matches[1], static_cast<std::size_t>(index), v);
                  detail::send_json(res, 200,
                                    {{"accepted", true},
                                     {"duplicate", ack.duplicate},
                                     {"next_cursor", ack.next_cursor},
                                     {"status", std::string(to_string(ack.status))}});
                });
              });

  server.Get(R"(/sessions/([A-Za-z0-9_-]+)/report)",
             [&store](const httplib::Request& req, httplib::Response& res) {
               detail::guarded(res, [&] {
                 auto body = to_json(store.report(req.matches[1]));
                 body["session_id"] = std::string(req.matches[1]);
                 detail::send_json(res, 200, body);
               });
             });

  server.Get("/report/aggregate",
             [&store](const httplib::Request& req, httplib::Response& res) {
               detail::guarded(res, [&] {
                 require(req.has_param("ids"), "missing ids parameter");
                 std::vector<std::string> ids;
                 for (auto& id : csv::split(req.get_param_value("ids"))) {
                   if (!id.empty()) ids.push_back(id);
                 }
                 auto body = to_json(store.aggregate(ids));
                 body["sessions"] = ids;
                 detail::send_json(res, 200, body);
               });
             });

  server.Get(R"(/images/([A-Za-z0-9]+))",
             [&store](const httplib::Request& req, httplib::Response& res) {
               detail::guarded(res, [&] {
                 const auto bytes = read_file_bytes(store.image_path(req.matches[1]));
                 res.status = 200;
                 res.set_content(std::string(bytes.begin(), bytes.end()),
                                 "image/png");
               });
             });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    detail::send_json(res, 200, {{"ok", true}});
  });
}

}  // namespace synthev::turing
