// Copyright 2026 The lid Authors
// SPDX-License-Identifier: Apache-2.0

#include "lid/service.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <fstream>
#include <json.hpp>
#include <random>
#include <regex>
#include <thread>

#include "lid/qr/qr.hpp"
#include "lid/token.hpp"
#include "lid/wbmp.hpp"
#include "lid/wml.hpp"

namespace lid::service {
namespace {

constexpr std::int64_t kStart = 1'760'000'000;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("lid_service_" + token::gen_token_id());
    std::filesystem::create_directories(dir_);
    save_signing_key(SigningKey::generate(), dir_ / "service.key");
    std::ofstream(dir_ / "users.jsonl")
        << R"({"user_id":"user01","pin":"482913","use_case":"offline","attributes":{"status":"student","age-over":"18"}})"
        << "\n"
        << R"({"user_id":"user02","pin":"907152","use_case":"subsidy","attributes":{"entitlement":"meal-subsidy"}})"
        << "\n";
    now_ = kStart;
  }

  void TearDown() override {
    client_.reset();
    service_.reset();
    std::filesystem::remove_all(dir_);
  }

  Config config() {
    Config c;
    c.port = 0;
    c.key_file = dir_ / "service.key";
    c.log_file = dir_ / "state.jsonl";
    c.fixture_file = dir_ / "users.jsonl";
    c.hash_strength = store::HashStrength::minimal();
    c.clock = [this] { return now_.load(); };
    return c;
  }

  void start(Config c) {
    client_.reset();
    service_.reset();
    service_ = std::make_unique<Service>(std::move(c));
    port_ = service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void start() { start(config()); }

  httplib::Result get(const std::string& path, const httplib::Headers& headers = {}) {
    auto res = client_->Get(path, headers);
    EXPECT_TRUE(res) << path;
    return res;
  }

  std::string auth_path(const std::string& user, const std::string& pin, std::optional<std::string> nonce) {
    std::string p = "/auth?user=" + user + "&pin=" + pin;
    if (nonce) p += "&nonce=" + *nonce;
    return p;
  }

  /// Path of the image referenced by a QR deck, or empty.
  std::string image_path(const std::string& deck) {
    std::smatch m;
    if (!std::regex_search(deck, m, std::regex(R"re(<img src="([^"]+)")re"))) return {};
    std::string src = m[1];
    EXPECT_EQ(src.rfind(service_->base_url(), 0), 0u) << src;
    return src.substr(service_->base_url().size());
  }

  std::string decode_image(const std::string& body) {
    auto bitmap = wbmp::decode(std::vector<std::uint8_t>(body.begin(), body.end()));
    EXPECT_LE(bitmap.width(), 46);
    EXPECT_LE(bitmap.height(), 46);
    return qr::qr_decode_grid(wbmp::sample_qr_grid(bitmap).grid);
  }

  /// /auth then /qr; returns the scanned payload.
  std::string login_and_scan(const std::string& user, const std::string& pin, std::optional<std::string> nonce) {
    auto deck = get(auth_path(user, pin, nonce));
    std::string path = image_path(deck->body);
    EXPECT_FALSE(path.empty()) << deck->body;
    if (path.empty()) return {};
    auto img = get(path);
    EXPECT_EQ(img->status, 200);
    EXPECT_EQ(img->get_header_value("Content-Type"), "image/vnd.wap.wbmp");
    return decode_image(img->body);
  }

  std::filesystem::path dir_;
  std::atomic<std::int64_t> now_{kStart};
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  int port_ = 0;
};

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

TEST(ServiceConfigTest, Validation) {
  Config c;
  c.pixel_budget = 20;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.pixel_budget = 21;
  EXPECT_NO_THROW(validate(c));
  c.validity_secs = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(ServiceConfigTest, ParseListen) {
  EXPECT_EQ(parse_listen("0.0.0.0:80"), (std::pair<std::string, int>{"0.0.0.0", 80}));
  EXPECT_EQ(parse_listen(":9000"), (std::pair<std::string, int>{"127.0.0.1", 9000}));
  EXPECT_EQ(parse_listen("8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
  EXPECT_EQ(parse_listen("[::1]:8080"), (std::pair<std::string, int>{"::1", 8080}));
  EXPECT_THROW(parse_listen("host:http"), std::invalid_argument);
  EXPECT_THROW(parse_listen("host:70000"), std::invalid_argument);
}

TEST_F(ServiceTest, MismatchedPublicKeyFileIsRejected) {
  save_public_key(SigningKey::generate().public_key(), dir_ / "other.pub");
  auto c = config();
  c.public_key_file = dir_ / "other.pub";
  EXPECT_THROW(Service{c}, std::invalid_argument);
}

TEST_F(ServiceTest, LoginDeck) {
  start();
  auto res = get("/login");
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/vnd.wap.wml");
  EXPECT_EQ(res->get_header_value("Cache-Control"), "max-age=86400");
  EXPECT_EQ(count(res->body, "<input "), 3u);
  EXPECT_EQ(res->body, wml::serialize(wml::build_login_deck(service_->base_url() + "/auth")));
  auto lite = get("/login?nonce_required=0");
  EXPECT_EQ(count(lite->body, "<input "), 2u);
  EXPECT_EQ(lite->get_header_value("Cache-Control"), "max-age=86400");
}

TEST_F(ServiceTest, WbxmlNegotiation) {
  start();
  auto text = get("/login");
  auto bin = get("/login", {{"Accept", "application/vnd.wap.wmlc, text/vnd.wap.wml;q=0.5"}});
  EXPECT_EQ(bin->get_header_value("Content-Type"), "application/vnd.wap.wmlc");
  ASSERT_GE(bin->body.size(), 4u);
  EXPECT_EQ(bin->body.substr(0, 4), std::string("\x03\x0A\x6A\x00", 4));
  auto expect = wml::wbxml_encode(wml::build_login_deck(service_->base_url() + "/auth"));
  EXPECT_EQ(bin->body, std::string(expect.begin(), expect.end()));
  EXPECT_LT(bin->body.size(), text->body.size());
  EXPECT_EQ(bin->get_header_value("Vary"), "Accept");
  auto refused = get("/login", {{"Accept", "application/vnd.wap.wmlc;q=0, text/vnd.wap.wml"}});
  EXPECT_EQ(refused->get_header_value("Content-Type"), "text/vnd.wap.wml");
  auto failed = get("/auth?user=x&pin=y", {{"Accept", "application/vnd.wap.wmlc"}});
  EXPECT_EQ(failed->get_header_value("Content-Type"), "application/vnd.wap.wmlc");
}

TEST_F(ServiceTest, NonceBoundCredentialEndToEnd) {
  start();
  auto deck = get(auth_path("user01", "482913", "483920"));
  EXPECT_EQ(deck->status, 200);
  EXPECT_EQ(deck->get_header_value("Cache-Control"), "no-store");
  std::string path = image_path(deck->body);
  ASSERT_FALSE(path.empty()) << deck->body;
  auto img = get(path);
  EXPECT_EQ(img->get_header_value("Cache-Control"), "no-store");
  std::string payload = decode_image(img->body);
  auto claims = token::verify_offline(payload, service_->public_key(), "483920", now_);
  EXPECT_EQ(claims.subject, "user01");
  EXPECT_EQ(claims.nonce, "483920");
  EXPECT_THROW(token::verify_offline(payload, service_->public_key(), "483921", now_), token::Error);
  // Nonce-bound images are shown once.
  EXPECT_EQ(get(path)->status, 410);
  // Offline credentials leave no trace in the store.
  EXPECT_EQ(service_->store().token_count(), 0u);
}

TEST_F(ServiceTest, NonceFreeCredentialIsCacheable) {
  auto c = config();
  c.validity_secs = 3600;
  start(c);
  auto deck = get(auth_path("user01", "482913", std::nullopt));
  EXPECT_EQ(deck->get_header_value("Cache-Control"), "private, max-age=3600");
  std::string path = image_path(deck->body);
  now_ += 100;
  auto img = get(path);
  EXPECT_EQ(img->get_header_value("Cache-Control"), "private, max-age=3500");
  auto claims = token::verify_offline(decode_image(img->body), service_->public_key(), std::nullopt, now_);
  EXPECT_FALSE(claims.nonce.has_value());
  EXPECT_EQ(claims.expires_at, kStart + 3600);
  // Repeat fetches are allowed until expiry, then the id is gone.
  EXPECT_EQ(get(path)->status, 200);
  now_ = kStart + 3600;
  EXPECT_EQ(get(path)->status, 410);
  EXPECT_EQ(get(path)->status, 404);
}

TEST_F(ServiceTest, FailureDecks) {
  start();
  for (const auto& p : {auth_path("user01", "000000", "483920"), auth_path("nobody", "482913", "483920"),
                        auth_path("user01", "482913", "48392"), auth_path("user01", "482913", "48392a"),
                        auth_path("user01", "482913", "12345678901"), auth_path("user01", "482913", ""),
                        std::string("/auth")}) {
    auto res = get(p);
    EXPECT_EQ(res->status, 200) << p;
    EXPECT_EQ(res->get_header_value("Content-Type"), "text/vnd.wap.wml");
    EXPECT_TRUE(image_path(res->body).empty()) << p;
    EXPECT_NE(res->body.find("<card id=\"failed\""), std::string::npos) << p;
    EXPECT_NE(res->body.find("href=\"" + service_->base_url() + "/login\""), std::string::npos);
  }
  EXPECT_EQ(service_->store().token_count(), 0u);
}

TEST_F(ServiceTest, QrErrors) {
  start();
  EXPECT_EQ(get("/qr/NOSUCHID.wbmp")->status, 404);
  EXPECT_EQ(get("/qr/bad-id.wbmp")->status, 404);
}

TEST_F(ServiceTest, PixelBudgetTooSmallGivesFailureDeck) {
  auto c = config();
  c.pixel_budget = 25;
  start(c);
  auto res = get(auth_path("user01", "482913", "483920"));
  EXPECT_EQ(res->status, 200);
  EXPECT_TRUE(image_path(res->body).empty());
}

TEST_F(ServiceTest, SubsidyUriSingleUse) {
  start();
  std::string uri = login_and_scan("user02", "907152", "483920");
  std::string prefix = service_->base_url() + "/r/";
  ASSERT_EQ(uri.rfind(prefix, 0), 0u) << uri;
  std::string path = uri.substr(service_->base_url().size());
  auto first = get(path);
  EXPECT_EQ(first->status, 200);
  EXPECT_EQ(first->get_header_value("Content-Type"), "application/json");
  auto body = nlohmann::json::parse(first->body);
  EXPECT_EQ(body.at("subject"), "user02");
  EXPECT_EQ(body.at("entitlement"), "meal-subsidy");
  EXPECT_EQ(body.at("redeemed_at"), kStart);
  EXPECT_EQ(get(path)->status, 409);
  EXPECT_EQ(get("/r/" + std::string(25, 'A'))->status, 404);
}

TEST_F(ServiceTest, ConcurrentRedeemsOverHttp) {
  start();
  auto issue = token::issue_uri("user02", "meal-subsidy", service_->base_url(), kStart);
  service_->store().put_uri_token(issue.token);
  std::atomic<int> ok{0}, conflict{0}, other{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 64; ++i) {
    threads.emplace_back([&] {
      httplib::Client c("127.0.0.1", port_);
      auto res = c.Get("/r/" + issue.token.token_id);
      if (res && res->status == 200) {
        ++ok;
      } else if (res && res->status == 409) {
        ++conflict;
      } else {
        ++other;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 1);
  EXPECT_EQ(conflict.load(), 63);
  EXPECT_EQ(other.load(), 0);
}

TEST_F(ServiceTest, RedemptionSurvivesRestart) {
  start();
  std::string uri = login_and_scan("user02", "907152", std::nullopt);
  std::string path = uri.substr(service_->base_url().size());
  start();  // same key, log and fixture
  EXPECT_EQ(get(path)->status, 200);
  start();
  EXPECT_EQ(get(path)->status, 409);
}

TEST_F(ServiceTest, PublicKey) {
  start();
  auto res = get("/pubkey");
  EXPECT_EQ(res->get_header_value("Content-Type"), "text/plain");
  ASSERT_EQ(res->body.size(), 64u);
  EXPECT_EQ(parse_public_key(res->body), service_->public_key());
  std::string payload = login_and_scan("user01", "482913", std::nullopt);
  EXPECT_NO_THROW(token::verify_offline(payload, parse_public_key(res->body), std::nullopt, now_));
  start();
  EXPECT_EQ(get("/pubkey")->body, res->body);
}

TEST_F(ServiceTest, FullLoopProperty) {
  start();
  std::mt19937 rng(99);
  for (int i = 0; i < 25; ++i) {
    std::optional<std::string> nonce;
    if (rng() % 3 != 0) nonce = token::gen_nonce(6 + static_cast<int>(rng() % 5)).digits;
    std::string payload = login_and_scan("user01", "482913", nonce);
    auto claims = token::verify_offline(payload, service_->public_key(), nonce, now_);
    EXPECT_EQ(claims.nonce, nonce);
    now_ += 17;
  }
}

}  // namespace
}  // namespace lid::service
