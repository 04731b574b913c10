#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "itercheck/gateway/gateway.hpp"

using namespace itercheck::gateway;

TEST_CASE("approximate tokenizer counts alphanumeric runs and punctuation") {
    CHECK(approx_token_count("") == 0);
    CHECK(approx_token_count("hello") == 1);
    CHECK(approx_token_count("hello world") == 2);
    CHECK(approx_token_count("(1+1)*4") == 7);  // ( 1 + 1 ) * 4
    CHECK(approx_token_count("  spaced   out  ") == 2);
}

TEST_CASE("sha256 matches the FIPS 180-4 test vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("scripted generator serves in order then raises ScriptExhausted") {
    ScriptedGenerator gen({"foo", "bar"});
    Completion a = gen.complete("prompt one");
    CHECK(a.text == "foo");
    CHECK(a.prompt_tokens > 0);
    CHECK(a.response_tokens > 0);
    CHECK(gen.complete("prompt two").text == "bar");
    CHECK_THROWS_AS(gen.complete("prompt three"), ScriptExhausted);
}

TEST_CASE("record store jsonl round-trips") {
    RecordStore store;
    store.append({sha256_hex("p1"), "r1", 1, 1});
    store.append({sha256_hex("p2"), "line with \"quotes\"\nand newline", 1, 7});
    RecordStore back = RecordStore::from_jsonl(store.to_jsonl());
    REQUIRE(back.entries().size() == 2);
    CHECK(back.entries()[1].response == store.entries()[1].response);
    CHECK(back.entries()[0].prompt_sha256 == store.entries()[0].prompt_sha256);
}

TEST_CASE("record then replay reproduces responses byte-exactly") {
    auto store = std::make_shared<RecordStore>();
    {
        RecordingGenerator rec(std::make_shared<ScriptedGenerator>(
                                   std::vector<std::string>{"alpha", "beta"}),
                               store);
        CHECK(rec.complete("first prompt").text == "alpha");
        CHECK(rec.complete("second prompt").text == "beta");
    }
    CHECK(store->entries().size() == 2);

    ReplayGenerator replay(store);
    CHECK(replay.complete("first prompt").text == "alpha");
    CHECK(replay.complete("second prompt").text == "beta");
    CHECK_THROWS_AS(replay.complete("third prompt"), ScriptExhausted);
}

TEST_CASE("replay detects an altered prompt") {
    auto store = std::make_shared<RecordStore>();
    store->append({sha256_hex("the prompt"), "the response", 2, 2});
    ReplayGenerator replay(store);
    CHECK_THROWS_AS(replay.complete("a different prompt"), ReplayMismatch);
}

TEST_CASE("generator book keeps per-instance streams independent") {
    auto book = GeneratorBook::scripted({{"a", {"a1", "a2"}}, {"b", {"b1"}}});
    auto ga = book.for_instance("a");
    auto gb = book.for_instance("b");
    CHECK(ga->complete("p").text == "a1");
    CHECK(gb->complete("p").text == "b1");
    CHECK(ga->complete("p").text == "a2");
    CHECK_THROWS_WITH(book.for_instance("missing")->complete("p"),
                      "no script for instance missing");
}

TEST_CASE("generator book recording sink captures per-instance stores") {
    auto book = GeneratorBook::scripted({{"a", {"a1"}}});
    auto sink =
        std::make_shared<std::map<std::string, std::shared_ptr<RecordStore>>>();
    book.enable_recording(sink);
    book.for_instance("a")->complete("prompt");
    REQUIRE(sink->count("a") == 1);
    CHECK(sink->at("a")->entries().size() == 1);
    CHECK(sink->at("a")->entries()[0].prompt_sha256 == sha256_hex("prompt"));
}

TEST_CASE("record store save and load") {
    RecordStore store;
    store.append({sha256_hex("p"), "resp", 3, 4});
    auto path = std::filesystem::temp_directory_path() / "itercheck_store_test.jsonl";
    store.save(path.string());
    RecordStore back = RecordStore::load(path.string());
    REQUIRE(back.entries().size() == 1);
    CHECK(back.entries()[0].prompt_tokens == 3);
    std::filesystem::remove(path);
}
