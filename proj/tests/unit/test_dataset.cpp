#include <catch2/catch_amalgamated.hpp>

#include "tecc/dataset.hpp"
#include "tecc/error.hpp"
#include "tecc/rng.hpp"

#include <algorithm>

using namespace tecc;
using Catch::Matchers::ContainsSubstring;

namespace {

DatasetManifest make_manifest(int pos, int neg) {
    DatasetManifest m;
    for (int i = 0; i < pos + neg; ++i) {
        ManifestEntry e;
        e.recording_id = "id" + std::to_string(i);
        e.audio_path = e.recording_id + ".wav";
        e.label = i < pos ? Label::positive : Label::negative;
        m.entries.push_back(e);
    }
    return m;
}

}  // namespace

TEST_CASE("manifest parses columns in any order") {
    const auto m = parse_manifest("label,id,nationality,gender,path\np,a,India,m,a.wav\nn,b,Other,f,sub/b.wav\n", "/data");
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].recording_id == "a");
    CHECK(m.entries[0].label == Label::positive);
    CHECK(m.entries[0].gender == Gender::male);
    CHECK(m.entries[1].nationality == "Other");
    CHECK(m.resolve_audio(m.entries[1]) == std::filesystem::path("/data/sub/b.wav"));
    CHECK(m.count(Label::positive) == 1);
    CHECK(m.find("b").gender == Gender::female);
    CHECK_THROWS_AS(m.find("zzz"), Error);
}

TEST_CASE("manifest with only a header is an empty manifest") {
    CHECK_THROWS_WITH(parse_manifest("id,path,label,gender,nationality\n"), ContainsSubstring("empty manifest"));
}

TEST_CASE("bad label names the offending row") {
    CHECK_THROWS_WITH(parse_manifest("id,path,label,gender,nationality\na,a.wav,p,m,X\nbad1,b.wav,x,m,X\n"),
                      ContainsSubstring("row 3") && ContainsSubstring("bad1"));
}

TEST_CASE("manifest errors") {
    CHECK_THROWS_WITH(parse_manifest("id,path,gender,nationality\na,a.wav,m,X\n"), ContainsSubstring("label"));
    CHECK_THROWS_WITH(parse_manifest("id,path,label,gender,nationality\na,a.wav,p,m,X\na,b.wav,n,m,X\n"),
                      ContainsSubstring("duplicate"));
}

TEST_CASE("manifest writer round-trips") {
    auto m = make_manifest(3, 5);
    m.entries[1].gender = Gender::female;
    m.entries[2].nationality = "Has, comma";
    const auto back = parse_manifest(format_manifest(m));
    CHECK(back.entries == m.entries);
}

TEST_CASE("822 recordings with 50 positives in 4 folds") {
    const auto m = make_manifest(50, 772);
    const auto folds = make_stratified_folds(m, 4, 0);
    std::vector<int> sizes(4, 0), pos(4, 0);
    for (const auto& e : m.entries) {
        const int f = folds.fold_of.at(e.recording_id);
        ++sizes[f];
        if (e.label == Label::positive) ++pos[f];
    }
    std::sort(sizes.rbegin(), sizes.rend());
    std::sort(pos.rbegin(), pos.rend());
    CHECK(sizes == std::vector<int>{206, 206, 205, 205});
    CHECK(pos == std::vector<int>{13, 13, 12, 12});
}

TEST_CASE("k=2 with two of each class puts one of each per fold") {
    const auto m = make_manifest(2, 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto folds = make_stratified_folds(m, 2, seed);
        for (int f = 0; f < 2; ++f) {
            int p = 0, n = 0;
            for (const auto& id : folds.members(m, f)) (m.find(id).label == Label::positive ? p : n)++;
            CHECK(p == 1);
            CHECK(n == 1);
        }
    }
}

TEST_CASE("fold assignment is deterministic and balanced for any seed") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int pos = 1 + static_cast<int>(rng.uniform_index(40));
        const int neg = 1 + static_cast<int>(rng.uniform_index(200));
        const int k = 2 + static_cast<int>(rng.uniform_index(6));
        if (pos + neg < k) continue;
        const auto m = make_manifest(pos, neg);
        const auto a = make_stratified_folds(m, k, trial);
        const auto b = make_stratified_folds(m, k, trial);
        CHECK(a.fold_of == b.fold_of);
        std::vector<int> sizes(k, 0), p(k, 0), n(k, 0);
        for (const auto& e : m.entries) {
            const int f = a.fold_of.at(e.recording_id);
            ++sizes[f];
            (e.label == Label::positive ? p : n)[f]++;
        }
        auto spread = [](const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end()); };
        CHECK(spread(sizes) <= 1);
        CHECK(spread(p) <= 1);
        CHECK(spread(n) <= 1);
    }
}

TEST_CASE("fold files round-trip and are validated against the manifest") {
    const auto m = make_manifest(4, 6);
    const auto folds = make_stratified_folds(m, 2, 5);
    const auto back = parse_fold_file(format_fold_file(folds, m));
    CHECK(back.k == 2);
    CHECK(back.fold_of == folds.fold_of);
    validate_folds(back, m);

    auto missing = back;
    missing.fold_of.erase("id0");
    CHECK_THROWS_WITH(validate_folds(missing, m), ContainsSubstring("id0"));
    CHECK_THROWS_AS(parse_fold_file("id,fold\na,x\n"), Error);
    CHECK_THROWS_AS(parse_fold_file("name,fold\na,1\n"), Error);
    CHECK_THROWS_AS(make_stratified_folds(m, 1, 0), Error);
}
