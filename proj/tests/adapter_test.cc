#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "json.hpp"
#include "sharedword/adapter.h"
#include "sharedword/errors.h"
#include "support/fake_server.h"
#include "test_util.h"

namespace sharedword {
namespace {

const AnnotatedSentence kP = annotate("buy a [PAD] car");
const AnnotatedSentence kQ = annotate("sell a boat");

TEST(WireFormat, PredictRequest) {
  const PairView views[] = {{&kP, &kQ}};
  const auto doc = nlohmann::json::parse(encode_predict_request(views));
  EXPECT_EQ(doc["pairs"][0][0], (std::vector<std::string>{"buy", "a", "[PAD]", "car"}));
  EXPECT_EQ(doc["pairs"][0][1], (std::vector<std::string>{"sell", "a", "boat"}));
}

TEST(WireFormat, MaskRequest) {
  const MaskQuery queries[] = {{&kP, 3}, {&kQ, 0}};
  const auto doc = nlohmann::json::parse(encode_mask_request(queries));
  EXPECT_EQ(doc["mask_indices"], (std::vector<int>{3, 0}));
  EXPECT_EQ(doc["sentences"].size(), 2u);
  const MaskQuery bad[] = {{&kQ, 3}};
  EXPECT_THROW(encode_mask_request(bad), InvalidInputError);
}

TEST(WireFormat, PredictResponseDecoding) {
  const auto ok = decode_predict_response(R"({"scores": [[0.9, 0.1], [0.2, 0.8]]})", 2);
  ASSERT_EQ(ok.size(), 2u);
  EXPECT_EQ(ok[1].p_negative, 0.8);
  EXPECT_THROW(decode_predict_response(R"({"scores": [[0.9, 0.1]]})", 2), ProtocolError);
  EXPECT_THROW(decode_predict_response(R"({"scores": [[0.9, 0.9]]})", 1), ProtocolError);
  EXPECT_THROW(decode_predict_response("nope", 1), ProtocolError);
  EXPECT_THROW(decode_predict_response(R"({"scores": [["a", 0.1]]})", 1), ProtocolError);
  EXPECT_THROW(decode_predict_response(R"({"error": "bad tokens"})", 1), InvalidInputError);
}

TEST(WireFormat, MaskResponseDecoding) {
  const auto ok = decode_mask_response(R"({"distributions": [{"car": 0.25, "boat": 0.75}]})", 1);
  EXPECT_EQ(ok[0].probability("boat"), 0.75);
  EXPECT_THROW(decode_mask_response(R"({"distributions": [{"car": 0.5}]})", 1), ProtocolError);
  EXPECT_THROW(decode_mask_response(R"({"distributions": []})", 1), ProtocolError);
  EXPECT_THROW(decode_mask_response(R"({"error": "x"})", 1), InvalidInputError);
}

TEST(PipeTransport, RoundTripsThroughChildProcess) {
  AdapterModel model(make_transport("pipe", SHAREDWORD_FAKE_ADAPTER));
  const PairView views[] = {{&kP, &kQ}, {&kQ, &kP}};
  const auto out = model.predict(views);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].p_positive, 0.75);
  EXPECT_FALSE(model.concurrent_safe());

  AdapterLm lm(make_transport("pipe", SHAREDWORD_FAKE_ADAPTER));
  const auto d = lm.mask_distribution(kQ, 2);
  EXPECT_EQ(d.probability("alpha"), 0.5);
}

TEST(PipeTransport, ErrorsAreClassified) {
  AdapterModel model(make_transport("pipe", SHAREDWORD_FAKE_ADAPTER));
  const auto error_p = annotate("ERROR here");
  const auto garbage_p = annotate("GARBAGE here");
  const auto short_p = annotate("SHORT here");
  const auto unnorm_p = annotate("UNNORMALIZED here");
  const PairView err[] = {{&error_p, &kQ}};
  const PairView garbage[] = {{&garbage_p, &kQ}};
  const PairView shorter[] = {{&short_p, &kQ}, {&kQ, &kQ}};
  const PairView unnorm[] = {{&unnorm_p, &kQ}};
  EXPECT_THROW(model.predict(err), InvalidInputError);
  EXPECT_THROW(model.predict(garbage), ProtocolError);
  EXPECT_THROW(model.predict(shorter), ProtocolError);
  EXPECT_THROW(model.predict(unnorm), ProtocolError);
  // The connection survives rejected requests.
  const PairView fine[] = {{&kP, &kQ}};
  EXPECT_EQ(model.predict(fine).size(), 1u);
}

TEST(PipeTransport, DeadPeerIsRetryableTransportError) {
  AdapterModel model(make_transport("pipe", SHAREDWORD_FAKE_ADAPTER));
  const auto hang = annotate("HANGUP now");
  const PairView views[] = {{&hang, &kQ}};
  try {
    model.predict(views);
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_TRUE(e.retryable());
  }
  AdapterModel missing(make_transport("pipe", "exit 0"));
  EXPECT_THROW(missing.predict(views), TransportError);
}

TEST(SocketTransport, UnixSocketRoundTrip) {
  const auto dir = testing::scratch_dir();
  testing::FakeSocketServer server((dir / "adapter.sock").string());
  AdapterModel model(make_transport("socket", server.path()));
  const PairView views[] = {{&kP, &kQ}};
  EXPECT_EQ(model.predict(views)[0].p_negative, 0.25);
  EXPECT_EQ(model.predict(views)[0].p_negative, 0.25);
  EXPECT_EQ(server.connections(), 1);

  AdapterLm lm(make_transport("socket", server.path()));
  const MaskQuery queries[] = {{&kP, 0}, {&kQ, 1}};
  EXPECT_EQ(lm.mask_distributions(queries).size(), 2u);
}

TEST(SocketTransport, ReconnectsAfterPeerHangsUp) {
  const auto dir = testing::scratch_dir();
  testing::FakeSocketServer server((dir / "adapter.sock").string());
  AdapterModel model(make_transport("socket", server.path()));
  const auto hang = annotate("HANGUP now");
  const PairView bad[] = {{&hang, &kQ}};
  const PairView good[] = {{&kP, &kQ}};
  EXPECT_THROW(model.predict(bad), TransportError);
  EXPECT_EQ(model.predict(good).size(), 1u);
  EXPECT_EQ(server.connections(), 2);
}

TEST(SocketTransport, ConnectionRefused) {
  AdapterModel model(make_transport("socket", "/nonexistent/dir/socket"));
  const PairView views[] = {{&kP, &kQ}};
  EXPECT_THROW(model.predict(views), TransportError);
  AdapterModel tcp(make_transport("socket", "127.0.0.1:1"));
  EXPECT_THROW(tcp.predict(views), TransportError);
  EXPECT_THROW(make_transport("carrier-pigeon", "x"), ConfigError);
}

class CountingTransport : public LineTransport {
 public:
  std::string round_trip(std::string_view request) override {
    ++calls;
    return testing::fake_adapter_reply(request);
  }
  int calls = 0;
};

TEST(CachingTransport, ServesRepeatsFromDisk) {
  const auto dir = testing::scratch_dir();
  auto inner = std::make_unique<CountingTransport>();
  CountingTransport* counter = inner.get();
  CachingTransport cache(dir / "cache", std::move(inner));
  const std::string request = R"({"pairs": [[["a"], ["b"]]]})";
  const std::string first = cache.round_trip(request);
  const std::string second = cache.round_trip(request);
  EXPECT_EQ(first, second);
  EXPECT_EQ(counter->calls, 1);
  cache.round_trip(R"({"pairs": [[["c"], ["d"]]]})");
  EXPECT_EQ(counter->calls, 2);
}

TEST(CachingTransport, EnabledByEnvironment) {
  const auto dir = testing::scratch_dir();
  ::setenv(kCacheEnvVar, (dir / "env-cache").c_str(), 1);
  {
    AdapterModel model(make_transport("pipe", SHAREDWORD_FAKE_ADAPTER));
    const PairView views[] = {{&kP, &kQ}};
    model.predict(views);
  }
  ::unsetenv(kCacheEnvVar);
  EXPECT_FALSE(std::filesystem::is_empty(dir / "env-cache"));
}

}  // namespace
}  // namespace sharedword
