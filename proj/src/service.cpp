// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/service.hpp"

#include <chrono>
#include <ctime>
#include <httplib.h>
#include <json.hpp>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lid/qr/qr.hpp"
#include "lid/token.hpp"
#include "lid/wbmp.hpp"
#include "lid/wml.hpp"

namespace lid::service {
namespace {

constexpr const char* kLoginCacheControl = "max-age=86400";

std::string utc_time(std::int64_t t) {
  std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%d %H:%M UTC", &tm);
  return buf;
}

bool accepts_wmlc(const httplib::Request& req) {
  std::string accept = req.get_header_value("Accept");
  std::size_t pos = 0;
  while (pos <= accept.size()) {
    std::size_t end = accept.find(',', pos);
    if (end == std::string::npos) end = accept.size();
    std::string item = accept.substr(pos, end - pos);
    pos = end + 1;
    std::string type = item.substr(0, item.find(';'));
    type.erase(0, type.find_first_not_of(" \t"));
    type.erase(type.find_last_not_of(" \t") + 1);
    if (type != wml::kWbxmlContentType) continue;
    auto q = item.find("q=");
    if (q != std::string::npos && std::strtod(item.c_str() + q + 2, nullptr) <= 0.0) continue;
    return true;
  }
  return false;
}

void send_deck(const httplib::Request& req, httplib::Response& res, const wml::Deck& deck,
               const std::string& cache_control) {
  res.set_header("Vary", "Accept");
  res.set_header("Cache-Control", cache_control);
  if (accepts_wmlc(req)) {
    auto bytes = wml::wbxml_encode(deck);
    res.set_content(std::string(bytes.begin(), bytes.end()), wml::kWbxmlContentType);
  } else {
    res.set_content(wml::serialize(deck), wml::kContentType);
  }
}

void send_text(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_header("Cache-Control", "no-store");
  res.set_content(body + "\n", "text/plain");
}

struct QrEntry {
  std::string payload;
  bool nonce_bound = false;
  std::int64_t expires_at = 0;
  bool fetched = false;
};

}  // namespace

void validate(const Config& c) {
  if (c.pixel_budget < 21) throw std::invalid_argument("pixel budget must be at least 21");
  if (c.validity_secs <= 0) throw std::invalid_argument("validity must be positive");
  if (c.port < 0 || c.port > 65535) throw std::invalid_argument("port out of range");
}

std::int64_t system_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::pair<std::string, int> parse_listen(const std::string& text) {
  std::string host = "127.0.0.1";
  std::string port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) host = text.substr(0, colon);
    port_text = text.substr(colon + 1);
  }
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  try {
    std::size_t used = 0;
    int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) throw std::invalid_argument("");
    return {host, port};
  } catch (const std::exception&) {
    throw std::invalid_argument("listen address must be host:port, got '" + text + "'");
  }
}

struct Service::Impl {
  Config config;
  SigningKey key;
  store::Store store;
  httplib::Server server;
  std::thread thread;
  std::mutex qr_mu;
  std::map<std::string, QrEntry> qr;

  explicit Impl(Config c)
      : config((validate(c), std::move(c))),
        key(load_signing_key(config.key_file)),
        store(config.log_file, config.hash_strength) {
    if (!config.clock) config.clock = system_now;
    if (config.public_key_file && load_public_key(*config.public_key_file) != key.public_key()) {
      throw std::invalid_argument("public key file does not match the signing key");
    }
    if (config.fixture_file) store::load_fixture(store, *config.fixture_file, config.clock());
    routes();
  }

  std::int64_t now() const { return config.clock(); }

  std::string url(const std::string& path) const { return config.base_url + path; }

  std::string register_qr(std::string payload, bool nonce_bound, std::int64_t expires_at) {
    std::string id = token::gen_token_id();
    std::lock_guard lock(qr_mu);
    std::int64_t t = now();
    std::erase_if(qr, [t](const auto& kv) { return kv.second.expires_at <= t; });
    qr[id] = QrEntry{std::move(payload), nonce_bound, expires_at, false};
    return id;
  }

  wml::Deck failure(const std::string& message) const {
    return wml::build_failure_deck(message, url("/login"));
  }

  void login(const httplib::Request& req, httplib::Response& res) {
    bool nonce_required = req.get_param_value("nonce_required") != "0";
    send_deck(req, res, wml::build_login_deck(url("/auth"), nonce_required), kLoginCacheControl);
  }

  void auth(const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> nonce;
    if (req.has_param("nonce")) {
      nonce = req.get_param_value("nonce");
      if (!token::is_valid_nonce(*nonce)) {
        send_deck(req, res, failure("The nonce must be 6 to 10 digits."), "no-store");
        return;
      }
    }
    store::UserRecord user;
    try {
      user = store.authenticate(req.get_param_value("user"), req.get_param_value("pin"));
    } catch (const store::Error& e) {
      if (e.code() != store::Errc::AuthFailed) throw;
      send_deck(req, res, failure("Login failed. Check your user ID and PIN."), "no-store");
      return;
    }

    std::int64_t t = now();
    std::int64_t expires_at = t + config.validity_secs;
    std::string payload, caption;
    bool nonce_bound = false;
    if (user.use_case == store::UseCase::OfflineCredential) {
      try {
        payload = token::issue_offline(user.user_id, user.attributes, config.validity_secs, nonce, key, t);
      } catch (const token::Error& e) {
        send_deck(req, res, failure("Your credential could not be issued."), "no-store");
        return;
      }
      nonce_bound = nonce.has_value();
      caption = "Valid until " + utc_time(expires_at);
    } else {
      auto issue = token::issue_uri(user.user_id, user.entitlement(), config.base_url, t);
      store.put_uri_token(issue.token);
      payload = std::move(issue.uri);
      caption = "Single-use voucher";
    }
    try {
      qr::select_version(static_cast<int>(payload.size()),
                         qr::is_alphanumeric(payload) ? qr::Mode::Alphanumeric : qr::Mode::Byte, qr::EccLevel::L,
                         config.pixel_budget);
    } catch (const qr::Error&) {
      send_deck(req, res, failure("The code does not fit this screen."), "no-store");
      return;
    }
    std::string id = register_qr(std::move(payload), nonce_bound, expires_at);
    std::string cache = nonce_bound ? "no-store" : "private, max-age=" + std::to_string(config.validity_secs);
    send_deck(req, res, wml::build_qr_deck(url("/qr/" + id + ".wbmp"), caption), cache);
  }

  void qr_image(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    QrEntry entry;
    {
      std::lock_guard lock(qr_mu);
      auto it = qr.find(id);
      if (it == qr.end()) return send_text(res, 404, "unknown QR id");
      if (now() >= it->second.expires_at) {
        qr.erase(it);
        return send_text(res, 410, "QR code expired");
      }
      if (it->second.nonce_bound && it->second.fetched) return send_text(res, 410, "QR code already shown");
      it->second.fetched = true;
      entry = it->second;
    }
    auto matrix = qr::qr_encode(entry.payload, qr::EccLevel::L, config.pixel_budget);
    auto image = wbmp::render_qr(matrix, {1, 0, config.pixel_budget});
    res.set_header("Cache-Control",
                   entry.nonce_bound ? "no-store" : "private, max-age=" + std::to_string(entry.expires_at - now()));
    res.set_content(std::string(image.bytes.begin(), image.bytes.end()), wbmp::kContentType);
  }

  void redeem(const httplib::Request& req, httplib::Response& res) {
    using nlohmann::json;
    res.set_header("Cache-Control", "no-store");
    std::optional<std::string> note;
    if (req.has_param("note")) note = req.get_param_value("note");
    try {
      auto data = store.redeem(req.matches[1], now(), note);
      json body = {{"subject", data.subject}, {"entitlement", data.entitlement}, {"redeemed_at", data.redeemed_at}};
      res.set_content(body.dump(), "application/json");
    } catch (const store::Error& e) {
      if (e.code() == store::Errc::AlreadyRedeemed) {
        res.status = 409;
      } else if (e.code() == store::Errc::UnknownToken) {
        res.status = 404;
      } else {
        throw;
      }
      res.set_content(json{{"error", store::to_string(e.code())}}.dump(), "application/json");
    }
  }

  void routes() {
    server.Get("/login", [this](const auto& req, auto& res) { login(req, res); });
    server.Get("/auth", [this](const auto& req, auto& res) { auth(req, res); });
    server.Get(R"(/qr/([0-9A-Z]+)\.wbmp)", [this](const auto& req, auto& res) { qr_image(req, res); });
    server.Get(R"(/r/([^/]+))", [this](const auto& req, auto& res) { redeem(req, res); });
    server.Get("/pubkey", [this](const auto&, auto& res) {
      res.set_content(public_key_hex(key.public_key()), "text/plain");
    });
    server.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_text(res, 500, what);
    });
    server.set_error_handler([](const auto&, auto& res) {
      if (res.body.empty()) send_text(res, res.status, httplib::status_message(res.status));
    });
  }
};

Service::Service(Config config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::bind() {
  auto& c = impl_->config;
  int port = c.port == 0 ? impl_->server.bind_to_any_port(c.host) : c.port;
  if (c.port != 0 && !impl_->server.bind_to_port(c.host, c.port)) port = -1;
  if (port < 0) throw std::runtime_error("cannot listen on " + c.host + ":" + std::to_string(c.port));
  c.port = port;
  if (c.base_url.empty()) c.base_url = "http://" + c.host + ":" + std::to_string(port);
  while (!c.base_url.empty() && c.base_url.back() == '/') c.base_url.pop_back();
  return port;
}

void Service::run() { impl_->server.listen_after_bind(); }

int Service::start() {
  int port = bind();
  impl_->thread = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

const std::string& Service::base_url() const { return impl_->config.base_url; }

const PublicKey& Service::public_key() const { return impl_->key.public_key(); }

store::Store& Service::store() { return impl_->store; }

}  // namespace lid::service
