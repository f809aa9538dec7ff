#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "wm/errors.hpp"
#include "wm/variant_store.hpp"

namespace wm {
namespace {

namespace fs = std::filesystem;

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
    static const std::string alphabet = "abcXYZ019 _-.~()=/";
    std::string s;
    const std::size_t len = rng() % (max_len + 1);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    // Canonical text: no surrounding blanks, and never empty for an ident.
    while (!s.empty() && s.back() == ' ') s.pop_back();
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    return s;
}

std::vector<InputVariant> random_set(std::mt19937_64& rng) {
    std::vector<InputVariant> set;
    const std::size_t count = 1 + rng() % 5;
    for (std::size_t i = 0; i < count; ++i) {
        InputVariant v = test::random_variant(rng, false);
        v.ident = "V" + random_text(rng, 12);
        v.comment = random_text(rng, 30);
        v.i_eta = static_cast<int>(rng() % 3);
        v.iDrawGraph = static_cast<int>(rng() % 2);
        set.push_back(v);
    }
    return set;
}

TEST(Parse, MinimalBlockKeepsOtherDefaults) {
    const auto r = parse_variants(
        "VariantIdent=VariantA\nVariantComment=Comment for VariantA\nkf=1\nrhof=0.3\nanus=0.35\n");
    ASSERT_EQ(r.variants.size(), 1u);
    InputVariant expected;
    expected.ident = "VariantA";
    expected.comment = "Comment for VariantA";
    expected.kf = 1.0;
    expected.rhof = 0.3;
    expected.anus = 0.35;
    EXPECT_EQ(r.variants[0], expected);
    EXPECT_TRUE(r.ignored.empty());
}

TEST(Parse, EmptyText) {
    const auto r = parse_variants("");
    EXPECT_TRUE(r.variants.empty());
    EXPECT_TRUE(r.ignored.empty());
}

TEST(Parse, SampleFile) {
    const auto set = load_variants(fs::path(WM_SAMPLES_DIR) / "QQ.dat");
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set.at(0).ident, "VariantA");
    EXPECT_EQ(set.at(1).ident, "VariantB");
    EXPECT_EQ(set.at(0).viscosity, 1.1e-8);
    EXPECT_EQ(set.at(1).i_eta, 2);
    EXPECT_EQ(set.selected(), std::optional<std::size_t>(1));
    EXPECT_FALSE(set.modified());
}

TEST(Parse, ToleratesTheGrammarCorners) {
    const std::string text =
        "kf=9\n"                       // before any ident: dropped
        "   // indented comment\n"
        "/ single slash comment\n"
        "VariantIdent = First \n"
        "\tkf\t= 2.5 trailing words\n"
        "rhof =0.1\n"
        "colour=red\n"                 // unknown key
        "anus\n"                       // no separator
        "n=abc\n"                      // not numeric
        "i_sealed=1.9\n"               // integer prefix
        "VariantComment=  spaced out  \n"
        "\n"
        "   \n"
        "VariantIdent=Second\n"
        "eta=3e1\n";
    const auto r = parse_variants(text);
    ASSERT_EQ(r.variants.size(), 2u);
    const InputVariant& a = r.variants[0];
    EXPECT_EQ(a.ident, "First");
    EXPECT_EQ(a.kf, 2.5);
    EXPECT_EQ(a.rhof, 0.1);
    EXPECT_EQ(a.n, InputVariant{}.n);
    EXPECT_EQ(a.i_sealed, 1);
    EXPECT_EQ(a.comment, "spaced out");
    EXPECT_EQ(r.variants[1].eta, 30.0);
    EXPECT_EQ(r.variants[1].kf, InputVariant{}.kf);

    ASSERT_EQ(r.ignored.size(), 4u);
    EXPECT_EQ(r.ignored[0].line, 1u);
    EXPECT_EQ(r.ignored[0].reason, "key before first VariantIdent");
    EXPECT_EQ(r.ignored[1].reason, "unknown key 'colour'");
    EXPECT_EQ(r.ignored[2].reason, "no '=' separator");
    EXPECT_EQ(r.ignored[3].line, 9u);
}

TEST(Parse, EmptyIdentGetsAName) {
    const auto r = parse_variants("VariantIdent=\nkf=2\n");
    ASSERT_EQ(r.variants.size(), 1u);
    EXPECT_EQ(r.variants[0].ident, "Variant1");
    EXPECT_EQ(r.ignored.size(), 1u);
}

TEST(Parse, CommentInsertionInvariance) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto set = random_set(rng);
        const std::string text = *serialize_variants(set);
        std::string noisy;
        for (const auto& line : lines_of(text)) {
            if (rng() % 3 == 0) noisy += std::string(rng() % 3, ' ') + "/" + random_text(rng, 20) + "\n";
            noisy += line + "\n";
        }
        noisy += "//trailing";
        EXPECT_EQ(parse_variants(noisy).variants, set);
    }
}

TEST(Serialize, KeyOrderAndSeparators) {
    const InputVariant one[] = {InputVariant{}};
    const std::string text = *serialize_variants(one);
    EXPECT_EQ(text,
              "\n//-----\nVariantIdent=\nVariantComment=\neta=1\nkf=1\nrhof=0.3\nanus=0.3\nn=0.3\n"
              "viscosity=1e-08\npermeabil=1\ni_sealed=0\ni_seepage=1\ni_eta=0\n\niDrawGraph=0\n");

    const InputVariant two[] = {InputVariant{}, InputVariant{}};
    const std::string t2 = *serialize_variants(two);
    std::size_t count = 0;
    for (auto pos = t2.find("//-----"); pos != std::string::npos; pos = t2.find("//-----", pos + 1)) ++count;
    EXPECT_EQ(count, 2u);
    EXPECT_FALSE(serialize_variants({}).has_value());
}

TEST(Serialize, RoundTripRandomSets) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 1000; ++i) {
        const auto set = random_set(rng);
        const auto r = parse_variants(*serialize_variants(set));
        EXPECT_EQ(r.variants, set);
        EXPECT_TRUE(r.ignored.empty());
    }
}

TEST(SetOps, CloneAppendsAndIsolates) {
    InputVariant a;
    a.ident = "VariantA";
    VariantSet set({a});
    set.clone_variant(0);
    ASSERT_EQ(set.size(), 2u);
    EXPECT_EQ(set.at(1).ident, "VariantA~Clone");
    EXPECT_EQ(set.selected(), std::optional<std::size_t>(1));
    EXPECT_TRUE(set.modified());
    set.clone_variant(1);
    EXPECT_EQ(set.at(2).ident, "VariantA~Clone~Clone");

    const std::size_t before = variant_hash(set.at(0));
    InputVariant edited = set.at(1);
    edited.kf = 4.0;
    set.update(1, edited);
    EXPECT_EQ(variant_hash(set.at(0)), before);
    EXPECT_EQ(set.at(0).kf, a.kf);
    EXPECT_THROW(set.clone_variant(7), std::out_of_range);
}

TEST(SetOps, DeleteClampsSelection) {
    auto make = [] {
        std::vector<InputVariant> v(3);
        v[0].ident = "A";
        v[1].ident = "B";
        v[2].ident = "C";
        return VariantSet(v);
    };
    VariantSet last = make();
    last.delete_variant(2);
    EXPECT_EQ(last.selected(), std::optional<std::size_t>(1));
    EXPECT_TRUE(last.modified());

    VariantSet mid = make();
    const std::size_t hash_a = variant_hash(mid.at(0)), hash_c = variant_hash(mid.at(2));
    mid.select(1);
    mid.delete_variant(1);
    EXPECT_EQ(mid.selected(), std::optional<std::size_t>(1));
    EXPECT_EQ(mid.at(1).ident, "C");
    EXPECT_EQ(variant_hash(mid.at(0)), hash_a);
    EXPECT_EQ(variant_hash(mid.at(1)), hash_c);

    VariantSet only({InputVariant{}});
    only.delete_variant(0);
    EXPECT_TRUE(only.empty());
    EXPECT_FALSE(only.selected().has_value());
    EXPECT_THROW(only.delete_variant(0), std::out_of_range);
}

TEST(SetOps, UpdateWithSameValueKeepsClean) {
    VariantSet set({InputVariant{}});
    set.update(0, InputVariant{});
    EXPECT_FALSE(set.modified());
    InputVariant changed;
    changed.n = 0.5;
    set.update(0, changed);
    EXPECT_TRUE(set.modified());
}

TEST(Save, BackupRotation) {
    const fs::path dir = test::temp_dir("bak");
    const fs::path file = dir / "QQ.dat";
    InputVariant a;
    a.ident = "A";
    VariantSet set({a});

    ASSERT_TRUE(save_with_backup(file, set));
    EXPECT_FALSE(fs::exists(dir / "QQ.bak"));
    EXPECT_FALSE(set.modified());
    EXPECT_EQ(set.path(), std::optional<fs::path>(file));
    const std::string first = test::read_file(file);

    set.clone_variant(0);
    ASSERT_TRUE(save_with_backup(file, set));
    EXPECT_EQ(test::read_file(dir / "QQ.bak"), first);
    const std::string second = test::read_file(file);
    EXPECT_EQ(parse_variants(second).variants.size(), 2u);

    set.delete_variant(0);
    ASSERT_TRUE(save_with_backup(file, set));
    EXPECT_EQ(test::read_file(dir / "QQ.bak"), second);

    VariantSet empty;
    EXPECT_FALSE(save_with_backup(dir / "empty.dat", empty));
    EXPECT_FALSE(fs::exists(dir / "empty.dat"));
    fs::remove_all(dir);
}

TEST(Save, UnwritablePathNamesThePath) {
    VariantSet set({InputVariant{}});
    const fs::path bad = "/nonexistent-dir/for-sure/QQ.dat";
    try {
        save_with_backup(bad, set);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("QQ.dat"), std::string::npos);
    }
    EXPECT_THROW(load_variants("/nonexistent-dir/QQ.dat"), IoError);
}

TEST(Legacy, ModeTwoLayout) {
    const auto lines = lines_of(emit_legacy_input(InputVariant{}, 2));
    ASSERT_EQ(lines.size(), 8u);
    EXPECT_EQ(lines[0], "0.3 1 1 0.3 0.3");
    EXPECT_EQ(lines[1], "1e-08 1");
    EXPECT_EQ(lines[2], "0 1 0");
    EXPECT_EQ(lines[3], "");
    EXPECT_EQ(lines[4], "");
    EXPECT_EQ(lines[5], "// n, eta, kf, rhof, anus");
    EXPECT_EQ(lines[6], "// viscosity, permeabil");
    EXPECT_EQ(lines[7], "// i_sealed, i_seepage, i_eta");
}

TEST(Legacy, ModeOneOmitsEtaAndPermeability) {
    InputVariant v;
    v.eta = 77.0;
    v.permeabil = 0.123;
    const std::string text = emit_legacy_input(v, 1);
    EXPECT_EQ(text.find("77"), std::string::npos);
    EXPECT_EQ(text.find("0.123"), std::string::npos);
    const auto lines = lines_of(text);
    ASSERT_EQ(lines.size(), 7u);
    EXPECT_EQ(lines[0], "0.3 1 0.3 0.3");
    EXPECT_EQ(lines[1], "1e-08 0 1 0");
    EXPECT_EQ(lines[2], "");
    EXPECT_EQ(lines[3], "");
    EXPECT_EQ(lines[4], "// n, kf, rhof, anus");
    EXPECT_EQ(lines[5], "// viscosity, j");
    EXPECT_EQ(lines[6], "// i_sealed, i_seepage, i_eta");
}

TEST(Legacy, BadModeAndDeterminism) {
    EXPECT_THROW(emit_legacy_input(InputVariant{}, 3), SelectorError);
    EXPECT_THROW(emit_legacy_input(InputVariant{}, 0), SelectorError);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const InputVariant v = test::random_variant(rng, false);
        EXPECT_EQ(emit_legacy_input(v, 2), emit_legacy_input(v, 2));
        // Numbers read back exactly.
        std::istringstream in(emit_legacy_input(v, 2));
        double n, eta, kf, rhof, anus, visc, perm;
        in >> n >> eta >> kf >> rhof >> anus >> visc >> perm;
        EXPECT_EQ(n, v.n);
        EXPECT_EQ(eta, v.eta);
        EXPECT_EQ(anus, v.anus);
        EXPECT_EQ(perm, v.permeabil);
    }
}

TEST(Legacy, FileNames) {
    EXPECT_EQ(legacy_input_path("samples/QQ.dat", 1), fs::path("samples/QQ~SEE-REF.txt"));
    EXPECT_EQ(legacy_input_path("samples/QQ.dat", 2), fs::path("samples/QQ~REF_COF.txt"));
    EXPECT_EQ(log_path_for("samples/QQ.dat"), fs::path("samples/QQ~Log.txt"));
    EXPECT_THROW(legacy_input_path("QQ.dat", 5), SelectorError);

    const fs::path dir = test::temp_dir("legacy");
    const fs::path written = write_legacy_input(InputVariant{}, dir / "QQ.dat", 2);
    EXPECT_EQ(test::read_file(written), emit_legacy_input(InputVariant{}, 2));
    fs::remove_all(dir);
}

TEST(Hash, ChangesWithEveryField) {
    const InputVariant base;
    const std::size_t h = variant_hash(base);
    InputVariant v = base;
    v.permeabil = 2.0;
    EXPECT_NE(variant_hash(v), h);
    v = base;
    v.comment = "x";
    EXPECT_NE(variant_hash(v), h);
    v = base;
    v.iDrawGraph = 1;
    EXPECT_NE(variant_hash(v), h);
    EXPECT_EQ(variant_hash(base), h);
}

}  // namespace
}  // namespace wm
