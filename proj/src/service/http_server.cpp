// Copyright 2026 The plantsam Authors
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "plantsam/error.hpp"
#include "plantsam/image_io.hpp"
#include "plantsam/service/service.hpp"

namespace plantsam::service {

Service::Service(ServiceConfig config)
    : config_([&] {
        config.pipeline.workers = config.workers;
        return std::move(config);
      }()),
      store_(config_.data_dir),
      jobs_(store_, config_.pipeline, config_.job_runners),
      sessions_(store_, jobs_, SessionConfig{config_.undo_depth, config_.pipeline.morphology}) {}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::Unsupported: return 400;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::StateConflict: return 409;
    case ErrorCode::Backend:
    case ErrorCode::Io: return 500;
  }
  return 500;
}

namespace {

using Json = nlohmann::ordered_json;

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code,
                const std::string& message) {
  send_json(res, {{"code", code}, {"message", message}}, status);
}

void send_mask(httplib::Response& res, const BinaryMask& mask) {
  const auto png = encode_mask_png(mask);
  res.set_content(std::string(png.begin(), png.end()), "image/png");
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed JSON body: ") + e.what());
  }
}

template <typename T>
T field_or(const nlohmann::json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  return body.at(key).get<T>();
}

Json session_view(const SessionState& s) {
  Json j = s.to_json();
  j.erase("seed_prompts");
  j["can_undo"] = !s.undo_stack.empty();
  j["can_redo"] = !s.redo_stack.empty();
  return j;
}

int parse_int(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, fmt::format("{} must be an integer, got '{}'", what, text));
}

}  // namespace

struct HttpServer::Impl {
  Service& service;
  httplib::Server server;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), to_string(e.code()), e.what());
      } catch (const nlohmann::json::exception& e) {
        send_error(res, 400, "invalid_argument", std::string("bad request body: ") + e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  explicit Impl(Service& s) : service(s) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}});
    });

    server.Get("/images", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::vector<std::string> ids;
      for (const auto& e : std::filesystem::directory_iterator(service.store().images_dir())) {
        if (e.is_regular_file() && valid_id(e.path().stem().string())) {
          ids.push_back(e.path().stem().string());
        }
      }
      std::sort(ids.begin(), ids.end());
      send_json(res, {{"images", ids}});
    }));

    server.Get("/images/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto& id = req.path_params.at("id");
      const auto path = service.store().find_image(id);
      if (!path) throw Error(ErrorCode::NotFound, "unknown image '" + id + "'");
      auto ext = path->extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
      res.set_content(read_file(*path), ext == ".png" ? "image/png" : "image/jpeg");
    }));

    server.Post("/jobs", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      JobRequest r;
      r.image_id = body.at("image_id").get<std::string>();
      r.strategy = parse_strategy(field_or<std::string>(body, "strategy", "multi_region"));
      r.detector = field_or<std::string>(body, "detector", "heuristic");
      r.segmenter = field_or<std::string>(body, "segmenter", "reference");
      send_json(res, {{"job_id", service.jobs().submit(r)}}, 202);
    }));

    server.Get("/jobs", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      for (const auto& r : service.jobs().list()) {
        Json j = r.to_json();
        j.erase("prompts");
        list.push_back(j);
      }
      send_json(res, {{"jobs", list}});
    }));

    server.Get("/jobs/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, service.jobs().get(req.path_params.at("id")).to_json());
    }));

    server.Get("/jobs/:id/mask", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_mask(res, service.jobs().mask(req.path_params.at("id")));
    }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      std::optional<std::string> segmenter;
      if (body.contains("segmenter") && !body.at("segmenter").is_null()) {
        segmenter = body.at("segmenter").get<std::string>();
      }
      const auto state = service.sessions().open(body.at("image_id").get<std::string>(),
                                                 field_or<std::string>(body, "seed", "empty"),
                                                 segmenter);
      send_json(res, session_view(state), 201);
    }));

    server.Get("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<UsabilityTag> tag;
      if (req.has_param("tag")) tag = parse_usability_tag(req.get_param_value("tag"));
      Json list = Json::array();
      for (const auto& s : service.sessions().list(tag)) list.push_back(session_view(s));
      send_json(res, {{"sessions", list}});
    }));

    server.Get("/sessions/:id", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, session_view(service.sessions().get(req.path_params.at("id"))));
    }));

    server.Post("/sessions/:id/points", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const Point p{body.at("x").get<int>(), body.at("y").get<int>()};
      const Polarity polarity = parse_polarity(body.at("polarity").get<std::string>());
      const int v = service.sessions().apply_point(req.path_params.at("id"), p, polarity);
      send_json(res, {{"mask_version", v}});
    }));

    const auto versioned = [this](int (SessionStore::*op)(const std::string&)) {
      return guarded([this, op](const httplib::Request& req, httplib::Response& res) {
        const int v = (service.sessions().*op)(req.path_params.at("id"));
        send_json(res, {{"mask_version", v}});
      });
    };
    server.Post("/sessions/:id/undo", versioned(&SessionStore::undo));
    server.Post("/sessions/:id/redo", versioned(&SessionStore::redo));
    server.Post("/sessions/:id/rerun", versioned(&SessionStore::rerun));

    const auto transition = [this](SessionState (SessionStore::*op)(const std::string&)) {
      return guarded([this, op](const httplib::Request& req, httplib::Response& res) {
        send_json(res, session_view((service.sessions().*op)(req.path_params.at("id"))));
      });
    };
    server.Post("/sessions/:id/accept", transition(&SessionStore::accept));
    server.Post("/sessions/:id/discard", transition(&SessionStore::discard));
    server.Post("/sessions/:id/resume", transition(&SessionStore::resume));

    server.Post("/sessions/:id/tag", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::string text;
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::parse_error&) {
        body = req.body;
      }
      if (body.is_object()) {
        text = body.at("tag").get<std::string>();
      } else if (body.is_string()) {
        text = body.get<std::string>();
      } else {
        throw Error(ErrorCode::InvalidArgument, "tag body must be {\"tag\": ...} or a string");
      }
      text.erase(0, text.find_first_not_of(" \t\r\n"));
      text.erase(text.find_last_not_of(" \t\r\n") + 1);
      send_json(res, session_view(service.sessions().tag(req.path_params.at("id"),
                                                         parse_usability_tag(text))));
    }));

    server.Get("/sessions/:id/mask", guarded([this](const httplib::Request& req, httplib::Response& res) {
      std::optional<int> version;
      if (req.has_param("version")) version = parse_int(req.get_param_value("version"), "version");
      send_mask(res, service.sessions().mask(req.path_params.at("id"), version));
    }));

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty() && res.status == 404) {
        send_error(res, 404, "not_found", "no route for " + req.method + " " + req.path);
      }
    });
  }
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::Io, fmt::format("cannot bind {}:{}", host, port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace plantsam::service
