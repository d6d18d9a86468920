// Copyright 2026 The evsum Authors
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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Tolerances and time limits are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "evsum/core.hpp"
#include "evsum/embeddings.hpp"
#include "evsum/render.hpp"
#include "evsum/search.hpp"
#include "evsum/service.hpp"
#include "evsum/tokenizer.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace evsum;
using nlohmann::json;

namespace {

constexpr double kOracleTolerance = 1e-9;
constexpr double kScaleTolerance = 1e-6;

// Collects failure messages for one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    std::string s = std::to_string(failed_) + " of " + std::to_string(checks_) +
                    " checks failed";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  std::string name;
  double limit_ms;  // 0 means no time limit
  std::function<void(Checker&)> body;
};

std::vector<std::string> window_words(const TokenizedDocument& doc,
                                      WindowBounds b) {
  std::vector<std::string> out;
  for (std::size_t j = b.lo; j <= b.hi; ++j) out.push_back(doc.tokens[j].text);
  return out;
}

using Words = std::vector<std::string>;

void boundary_windows(Checker& c) {
  const WindowSpec w6{6};
  const auto head = tokenize("we stand at the border of an era The world");
  const std::vector<Words> head_expected = {
      {"we", "stand", "at"},
      {"we", "stand", "at", "the"},
      {"we", "stand", "at", "the", "border"},
      {"we", "stand", "at", "the", "border", "of"},
      {"stand", "at", "the", "border", "of", "an"},
      {"at", "the", "border", "of", "an", "era"},
      {"the", "border", "of", "an", "era", "The"},
      {"border", "of", "an", "era", "The", "world"},
  };
  for (std::size_t i = 0; i < head_expected.size(); ++i) {
    c.expect(window_words(head, window_bounds(i, head.size(), w6)) == head_expected[i],
             "head window " + std::to_string(i));
  }
  c.expect(window_bounds(0, 100, w6) == WindowBounds{0, 2}, "(0,100) -> (0,2)");
  c.expect(window_bounds(4, 100, w6) == WindowBounds{1, 6}, "(4,100) -> (1,6)");

  // Clipping leaves the final word a 4-token window (three before it, none
  // after). A 3-token final window is an open question; this follows the
  // clipping formula.
  const auto tail = tokenize(
      "whether one provides for life only to die live only to find the true");
  const std::size_t n = tail.size();
  const std::vector<Words> tail_expected = {
      {"only", "to", "die", "live", "only", "to"},
      {"to", "die", "live", "only", "to", "find"},
      {"die", "live", "only", "to", "find", "the"},
      {"live", "only", "to", "find", "the", "true"},
      {"only", "to", "find", "the", "true"},
      {"to", "find", "the", "true"},
  };
  for (std::size_t k = 0; k < tail_expected.size(); ++k) {
    const std::size_t i = n - tail_expected.size() + k;
    c.expect(window_words(tail, window_bounds(i, n, w6)) == tail_expected[k],
             "tail window " + std::to_string(k));
  }
  c.expect(window_bounds(n - 1, n, w6).length() == 4, "final window has 4 tokens");
}

void oracle_equivalence(Checker& c) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> tables_dist(1, 3), wdist(1, 8);
  std::uniform_int_distribution<int> pct(0, 100);
  const PoolingMode modes[] = {PoolingMode::kMean, PoolingMode::kMax,
                               PoolingMode::kMin};
  for (int trial = 0; trial < 200; ++trial) {
    const auto world = testing::make_world(rng, 30, tables_dist(rng), 8);
    const auto stack = world.stack();
    const std::string text = testing::random_text(rng, world, 1, 50);
    const auto doc = tokenize(text);
    const PoolingMode mode = modes[trial % 3];
    const std::size_t w = wdist(rng);
    const bool unbiased = trial % 5 == 0;
    const std::string qtext = testing::random_text(rng, world, 1, 6);
    const BiasQuery q = unbiased ? BiasQuery::unbiased() : BiasQuery::text(qtext);

    const auto got = score_document(doc, stack, WindowSpec{w}, mode, q);
    const auto want = oracle::scores(text, world.oracle_tables, static_cast<long>(w),
                                     testing::to_oracle(mode),
                                     unbiased ? nullptr : &qtext);
    const std::string tag = "case " + std::to_string(trial);
    if (got.scores.size() != want.size()) {
      c.expect(false, tag + " length");
      continue;
    }
    double worst = 0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      worst = std::max(worst, std::abs(got.scores[i] - want[i]));
    }
    c.expect(worst <= kOracleTolerance, tag + " max error " + std::to_string(worst));

    const int u = pct(rng), h = pct(rng);
    const auto sel = select(got, u, h);
    const auto [ou, oh] = oracle::select(got.scores, u, h);
    c.expect(sel.underlined == ou && sel.highlighted == oh, tag + " selection");
  }
}

void property_suite(Checker& c) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> wdist(1, 10);
  std::uniform_int_distribution<int> pct(0, 100);
  std::uniform_real_distribution<float> scale_dist(0.01f, 50.0f);
  const PoolingMode modes[] = {PoolingMode::kMean, PoolingMode::kMax,
                               PoolingMode::kMin};
  constexpr int kTrials = 1200;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::string tag = "trial " + std::to_string(trial);
    const auto world = testing::make_world(rng, 25, 1 + trial % 2, 6);
    const auto stack = world.stack();
    auto doc = std::make_shared<const TokenizedDocument>(
        tokenize(testing::random_text(rng, world, 1, 60)));
    const PoolingMode mode = modes[trial % 3];
    const WindowSpec w{wdist(rng)};
    const BiasQuery q = BiasQuery::text(testing::random_text(rng, world, 1, 4));
    const auto s = score_document(*doc, stack, w, mode, q);

    bool in_range = true;
    for (double x : s.scores) in_range = in_range && x >= -1.0 && x <= 1.0;
    c.expect(in_range, tag + " range");

    // Positive scaling of every table entry leaves cosines unchanged.
    const auto scaled_stack = [&](float factor) {
      std::vector<std::shared_ptr<const EmbeddingTable>> scaled;
      for (const auto& t : world.tables) {
        std::vector<EmbeddingTable::Entry> entries;
        for (const auto& token : t->tokens()) {
          const auto v = *t->find(token);
          std::vector<float> sv(v.begin(), v.end());
          for (float& x : sv) x *= factor;
          entries.emplace_back(token, std::move(sv));
        }
        scaled.push_back(std::make_shared<const EmbeddingTable>(EmbeddingTable::from_entries(
            t->name(), t->dimension(), std::move(entries))));
      }
      return EmbeddingStack(scaled);
    };
    const auto s2 = score_document(*doc, scaled_stack(scale_dist(rng)), w, mode, q);
    double worst = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      worst = std::max(worst, std::abs(s.scores[i] - s2.scores[i]));
    }
    c.expect(worst <= kScaleTolerance, tag + " scaling");
    // Argmax is compared only when the top two scores are clearly apart.
    const auto order = rank_order(s.scores);
    const auto order2 = rank_order(s2.scores);
    if (order.size() < 2 || s.scores[order[0]] - s.scores[order[1]] > 1e-4) {
      c.expect(order[0] == order2[0], tag + " argmax under scaling");
    }
    // Power-of-two factors scale exactly in floating point, so the selection
    // must not change at all.
    const float pow2 = std::ldexp(1.0f, static_cast<int>(trial % 7) - 3);
    const auto s3 = score_document(*doc, scaled_stack(pow2), w, mode, q);
    c.expect(select(s3, 70, 65) == select(s, 70, 65), tag + " selection under scaling");

    // Nesting in both percentages.
    int a = pct(rng), b = pct(rng);
    if (a > b) std::swap(a, b);
    const auto small = select(s, a, a);
    const auto large = select(s, b, b);
    bool nested = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      nested = nested && (!small.underlined[i] || large.underlined[i]);
      nested = nested && (!small.highlighted[i] || large.highlighted[i]);
    }
    const auto tiers = select(s, b, a);
    for (std::size_t i = 0; i < s.size(); ++i) {
      nested = nested && (!tiers.highlighted[i] || tiers.underlined[i]);
    }
    c.expect(nested, tag + " nesting");

    // Sentinel equals the document as its own query.
    const auto u1 = score_document(*doc, stack, w, mode, BiasQuery::parse("-1"));
    const auto u2 =
        score_document(*doc, stack, w, mode, BiasQuery::text(doc->source));
    c.expect(u1.scores == u2.scores && u1.fingerprint == u2.fingerprint,
             tag + " sentinel");

    // Determinism.
    const auto again = score_document(*doc, stack, w, mode, q);
    c.expect(again.scores == s.scores && again.fingerprint == s.fingerprint,
             tag + " determinism");

    // Tokenizer round trip on arbitrary text.
    const std::string raw = testing::random_unicode_text(rng, 30);
    const auto rdoc = tokenize(raw);
    std::string rebuilt;
    std::size_t pos = 0;
    for (const Token& t : rdoc.tokens) {
      rebuilt += raw.substr(pos, t.byte_start - pos) + t.text;
      pos = t.byte_end;
    }
    rebuilt += raw.substr(pos);
    c.expect(rebuilt == raw, tag + " tokenizer round trip");

    // Renderer round trips over the unicode document.
    CardDocument card;
    card.tag = "t";
    card.document = std::make_shared<const TokenizedDocument>(rdoc);
    std::uniform_real_distribution<double> val(-1, 1);
    for (std::size_t i = 0; i < rdoc.size(); ++i) card.scores.push_back(val(rng));
    card.selection = select(ScoreVector{card.scores, {}}, b, a);
    c.expect(oracle::strip_ansi(render_terminal(card)) == raw, tag + " terminal");
    c.expect(oracle::html_body_text(render_html(card)) == raw, tag + " html");
    // Re-assemble the body from the gaps between spans and each span's token.
    std::string from_spans;
    std::size_t cursor = 0;
    bool spans_ok = true;
    for (const auto& span : make_span_report(card).spans) {
      if (span.byte_start < cursor) continue;  // second tier of the same token
      const std::string& token = rdoc.tokens[span.token_index].text;
      spans_ok = spans_ok && span.byte_end - span.byte_start == token.size();
      from_spans += raw.substr(cursor, span.byte_start - cursor) + token;
      cursor = span.byte_end;
    }
    from_spans += raw.substr(std::min(cursor, raw.size()));
    c.expect(spans_ok && from_spans == raw, tag + " spans");
  }
  c.expect(kTrials >= 1000, "trial count");
}

// Topic-block corpus: each word belongs to one topic and its vector is the
// topic center plus small noise; documents are runs of same-topic words.
double mean_underlined_run(std::size_t window) {
  constexpr std::size_t kTopics = 6, kWordsPerTopic = 25, kDim = 16;
  std::mt19937_64 rng(99);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::vector<std::vector<float>> centers(kTopics, std::vector<float>(kDim));
  for (auto& c : centers) {
    for (float& x : c) x = gauss(rng);
  }
  std::vector<EmbeddingTable::Entry> entries;
  for (std::size_t t = 0; t < kTopics; ++t) {
    for (std::size_t k = 0; k < kWordsPerTopic; ++k) {
      std::vector<float> v = centers[t];
      for (float& x : v) x += 0.8f * gauss(rng);
      entries.emplace_back("t" + std::to_string(t) + "w" + std::to_string(k),
                           std::move(v));
    }
  }
  const EmbeddingStack stack(
      EmbeddingTable::from_entries("topics", kDim, std::move(entries)));

  std::uniform_int_distribution<std::size_t> topic(0, kTopics - 1),
      word(0, kWordsPerTopic - 1), block(10, 40);
  std::size_t runs = 0, run_tokens = 0;
  for (int d = 0; d < 20; ++d) {
    std::string text;
    while (text.size() < 4000) {
      const std::size_t t = topic(rng);
      for (std::size_t len = block(rng); len > 0; --len) {
        text += "t" + std::to_string(t) + "w" + std::to_string(word(rng)) + " ";
      }
    }
    const auto doc = tokenize(text);
    const auto s = score_document(doc, stack, WindowSpec{window}, PoolingMode::kMean,
                                  BiasQuery::text("t0w1 t0w2 t0w3"));
    const auto sel = select(s, 70, 65);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!sel.underlined[i]) continue;
      ++run_tokens;
      if (i == 0 || !sel.underlined[i - 1]) ++runs;
    }
  }
  return runs == 0 ? 0.0 : static_cast<double>(run_tokens) / runs;
}

void run_length_trend(Checker& c) {
  const double r6 = mean_underlined_run(6);
  const double r12 = mean_underlined_run(12);
  const double r20 = mean_underlined_run(20);
  std::printf("      mean underlined run length: W=6 %.3f, W=12 %.3f, W=20 %.3f\n",
              r6, r12, r20);
  c.expect(r6 <= r12, "W=6 <= W=12");
  c.expect(r12 <= r20, "W=12 <= W=20");
}

void count_exactness(Checker& c) {
  const auto stack = load_stack({std::string(EVSUM_TEST_DATA) + "/toy_vectors.txt"});
  std::mt19937_64 rng(5);
  const auto vocab = stack->tables()[0]->tokens();
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string text;
  for (int i = 0; i < 100; ++i) text += vocab[pick(rng)] + (i % 9 == 8 ? "\n" : " ");
  CardDocument card;
  card.tag = "count";
  card.document = std::make_shared<const TokenizedDocument>(tokenize(text));
  c.expect(card.document->size() == 100, "100 tokens");
  const auto s = score_document(*card.document, *stack, WindowSpec{6},
                                PoolingMode::kMean, BiasQuery::unbiased());
  card.scores = s.scores;
  card.selection = select(s, 70, 65);
  const auto j = json::parse(render_spans(card));
  std::size_t u = 0, h = 0;
  for (const auto& span : j["spans"]) (span["tier"] == "underline" ? u : h) += 1;
  c.expect(u == 70, "underlined " + std::to_string(u));
  c.expect(h == 65, "highlighted " + std::to_string(h));
}

void service_contract(Checker& c) {
  ServiceConfig cfg;
  cfg.embeddings = {std::string(EVSUM_TEST_DATA) + "/toy_vectors.txt"};
  const auto stack = load_stack(cfg.embeddings);
  c.expect(stack->tables()[0]->size() == 10, "10-entry vector file");
  SummaryService svc(cfg, stack);
  HttpFrontend http(svc);
  const int port = http.bind("127.0.0.1", 0);
  c.expect(port > 0, "bind");
  if (port <= 0) return;
  std::thread server([&] { http.listen_after_bind(); });
  http.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto post = [&](const std::string& path, const json& body) {
    auto r = client.Post(path, body.dump(), "application/json");
    return r ? std::make_pair(r->status, r->body) : std::make_pair(-1, std::string());
  };

  const std::string text =
      "The economic decline of the road and the car caused war, and the cat\n"
      "and the dog drove past the pet on the road while war continued.";
  const auto [cs, cbody] = post("/v1/documents", {{"text", text}});
  c.expect(cs == 201, "create 201");
  const std::string id = cs == 201 ? json::parse(cbody)["id"].get<std::string>() : "x";
  const std::string base = "/v1/documents/" + id;

  const json req = {{"query", "economic war"}, {"window", 4}};
  const auto [s1, b1] = post(base + "/summary", req);
  const auto [s2, b2] = post(base + "/summary", req);
  c.expect(s1 == 200 && s2 == 200, "summary 200");
  if (s1 == 200 && s2 == 200) {
    json j1 = json::parse(b1), j2 = json::parse(b2);
    c.expect(j1["cache_hit"] == false, "first miss");
    c.expect(j2["cache_hit"] == true, "second hit");
    std::string t1 = b1, t2 = b2;
    const auto strip = [](std::string s) {
      const std::string miss = "\"cache_hit\":false", hit = "\"cache_hit\":true";
      if (auto at = s.find(miss); at != std::string::npos) s.erase(at, miss.size());
      if (auto at = s.find(hit); at != std::string::npos) s.erase(at, hit.size());
      return s;
    };
    c.expect(strip(t1) == strip(t2), "byte-identical apart from cache_hit");

    json lower = req;
    lower["underline_pct"] = 30;
    lower["highlight_pct"] = 20;
    const auto [s3, b3] = post(base + "/summary", lower);
    c.expect(s3 == 200, "re-threshold 200");
    const json j3 = json::parse(b3);
    c.expect(j3["cache_hit"] == true, "re-threshold uses cache");
    std::set<std::pair<std::string, std::size_t>> before, after;
    for (const auto& sp : j1["result"]["spans"]) {
      before.insert({sp["tier"].get<std::string>(), sp["token_index"].get<std::size_t>()});
    }
    for (const auto& sp : j3["result"]["spans"]) {
      after.insert({sp["tier"].get<std::string>(), sp["token_index"].get<std::size_t>()});
    }
    c.expect(!after.empty() &&
                 std::includes(before.begin(), before.end(), after.begin(), after.end()),
             "re-threshold subset");
  }

  const auto [ss, sb] = post(base + "/search", {{"query", "car road"}, {"k", 4}});
  c.expect(ss == 200, "search 200");
  if (ss == 200) {
    const auto hits = json::parse(sb)["hits"];
    c.expect(!hits.empty() && hits.size() <= 4, "hit count");
    for (std::size_t i = 0; i < hits.size(); ++i) {
      const std::size_t lo = hits[i]["byte_start"], hi = hits[i]["byte_end"];
      c.expect(lo < hi && hi <= text.size(), "hit in bounds");
      c.expect(hits[i]["text"] == text.substr(lo, hi - lo), "hit text");
      c.expect(hits[i]["rank"] == i + 1, "rank order");
      if (i > 0) {
        c.expect(hits[i - 1]["score"].get<double>() >= hits[i]["score"].get<double>(),
                 "scores descending");
      }
      for (std::size_t k = 0; k < i; ++k) {
        const std::size_t klo = hits[k]["byte_start"], khi = hits[k]["byte_end"];
        c.expect(hi <= klo || khi <= lo, "dedupe non-overlap");
      }
    }
  }

  for (int round = 0; round < 2; ++round) {
    auto del = client.Delete(base);
    c.expect(del && del->status == 200, "delete 200");
  }
  const auto [gs, gb] = post(base + "/summary", req);
  c.expect(gs == 404, "deleted document is gone");

  http.stop();
  server.join();
}

void performance(Checker& c) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> val(-1, 1);
  std::vector<EmbeddingTable::Entry> entries;
  for (int i = 0; i < 5000; ++i) {
    std::vector<float> v(50);
    for (float& x : v) x = val(rng);
    entries.emplace_back("v" + std::to_string(i), std::move(v));
  }
  const EmbeddingStack stack(EmbeddingTable::from_entries("perf", 50, std::move(entries)));
  std::uniform_int_distribution<int> pick(0, 5999);  // some OOV
  std::string text;
  for (int i = 0; i < 10000; ++i) text += "v" + std::to_string(pick(rng)) + " ";

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto doc = tokenize(text);
  const auto s = score_document(doc, stack, WindowSpec{6}, PoolingMode::kMean,
                                BiasQuery::text("v1 v2 v3 v4"));
  const auto t1 = clock::now();
  const auto sel = select(s, 55, 40);
  const auto t2 = clock::now();
  const double score_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const double select_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  std::printf("      10k tokens: scoring %.1f ms, re-threshold %.2f ms\n", score_ms,
              select_ms);
  c.expect(doc.size() == 10000, "10k tokens");
  c.expect(sel.underline_count() == 5500, "selection size");
  c.expect(score_ms < 2000.0, "scoring under 2 s");
  c.expect(select_ms < 50.0, "re-threshold under 50 ms");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"boundary windows (W=6 head and tail fixture)", 1000, boundary_windows},
      {"oracle equivalence (200 cases, 1e-9)", 10000, oracle_equivalence},
      {"property suite (1200 trials)", 30000, property_suite},
      {"run-length trend W=6 -> 12 -> 20", 5000, run_length_trend},
      {"count exactness (100 tokens, 70/65)", 0, count_exactness},
      {"service contract (live HTTP)", 5000, service_contract},
      {"performance (10k tokens, 50 dims)", 0, performance},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checker c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    if (cr.limit_ms > 0 && ms > cr.limit_ms) {
      c.expect(false, "took " + std::to_string(ms) + " ms");
    }
    std::printf("%s  %-48s %9.1f ms  %zu checks%s%s\n", c.ok() ? "PASS" : "FAIL",
                cr.name.c_str(), ms, c.checks(), c.ok() ? "" : "  ",
                c.ok() ? "" : c.summary().c_str());
    if (!c.ok()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
