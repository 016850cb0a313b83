#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "susbam/catalog.hpp"
#include "susbam/csv.hpp"
#include "susbam/error.hpp"

using namespace susbam;
using namespace susbam::catalog;

namespace {

const std::filesystem::path kData = SUSBAM_TEST_DATA_DIR;

// The published 50-command survey. Code: S success, F fail, T trigger, W trigger with a wrong command.
struct SurveyRow {
    int id;
    const char* command;
    char nuit;
};

constexpr SurveyRow kSurvey[] = {
    {0, "Help", 'S'},
    {1, "Mute", 'F'},
    {2, "Unmute", 'S'},
    {3, "Stop", 'T'},
    {4, "Louder", 'S'},
    {5, "Set the volume to five", 'T'},
    {6, "Play some music", 'S'},
    {7, "Set a timer for one minute", 'S'},
    {8, "What's playing?", 'S'},
    {9, "When is Christmas next year?", 'S'},
    {10, "What's on my calendar for tomorrow?", 'S'},
    {11, "What's in the news?", 'S'},
    {12, "What's the weather like?", 'S'},
    {13, "What's the traffic like?", 'S'},
    {14, "What movies are playing?", 'S'},
    {15, "What is Tom Holland's latest movie?", 'F'},
    {16, "Who is in The Rolling Stones?", 'S'},
    {17, "What's five plus seven?", 'S'},
    {18, "Flip a coin", 'S'},
    {19, "Pick a number between one and ten", 'S'},
    {20, "What's the definition of ultrasound?", 'S'},
    {21, "How do you spell Apple?", 'S'},
    {22, "Did the Lakers win?", 'W'},
    {23, "When do the Lakers play next?", 'S'},
    {24, "Which profile is this?", 'F'},
    {25, "What kid's skills do you have?", 'S'},
    {26, "Wikipedia ultrasound", 'S'},
    {27, "How tall is Steph Curry?", 'F'},
    {28, "Tell me a joke", 'S'},
    {29, "Beam me up", 'S'},
    {30, "Set phasers to kill", 'T'},
    {31, "Tea. Earl grey. Hot.", 'T'},
    {32, "My name is Inigo Montoya", 'S'},
    {33, "I want the truth", 'F'},
    {34, "Party on, Wayne.", 'W'},
    {35, "Show me the money!", 'S'},
    {36, "What's the first rule of Fight Club?", 'S'},
    {37, "Surely you can't be serious", 'T'},
    {38, "Are you Skynet?", 'T'},
    {39, "Party time!", 'W'},
    {40, "Open the pod bay doors.", 'S'},
    {41, "What is your quest?", 'W'},
    {42, "Don't mention the war", 'F'},
    {43, "What is your cunning plan?", 'W'},
    {44, "What is the loneliest number?", 'T'},
    {45, "What is the best tablet?", 'F'},
    {46, "Do aliens exist?", 'T'},
    {47, "Where do you live?", 'F'},
    {48, "How tall are you?", 'S'},
    {49, "I think you're funny", 'S'},
};

std::size_t parse_error_row(std::string_view text, bool survey) {
    try {
        if (survey) {
            (void)parse_survey(text);
        } else {
            (void)parse_catalog(text);
        }
    } catch (const susbam::ParseError& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        return e.row();
    }
    FAIL("expected a parse error");
    return 0;
}

std::string catalog_with(const std::string& row) {
    return std::string(kCatalogHeader) + "\n" + row + "\n";
}

std::string survey_with(const std::string& rows) {
    return std::string(kSurveyHeader) + "\n" + rows;
}

}  // namespace

TEST_CASE("bundled catalog holds the twenty pairings") {
    const auto cat = load_catalog(kData / "mitre_catalog.csv");
    CHECK(cat.size() == 20);
    for (const auto& e : cat) CHECK(e.ultrasonic_applicable);
    CHECK(cat.front().attack_tactic == "Initial Access");
    CHECK(cat.back().attack_technique_id == "T1567");
    // tactic cells continue down the table
    CHECK(cat[1].attack_tactic == "Initial Access");
    CHECK(cat[9].attack_tactic == "Defense Evasion");
}

TEST_CASE("spot queries match the worked examples") {
    const auto cat = load_catalog(kData / "mitre_catalog.csv");

    const auto drive_by = pair_defense(cat, "T1189");
    REQUIRE(drive_by.size() == 1);
    CHECK(drive_by[0].attack_technique_name == "Drive-by Compromise");
    CHECK(drive_by[0].defend_tactic == "User Training");
    CHECK(drive_by[0].defend_technique_id == "D3-T1023");
    CHECK(drive_by[0].defend_technique_name == "Security Awareness Training");

    const auto accounts = pair_defense(cat, "T1078");
    REQUIRE(accounts.size() == 1);
    CHECK(accounts[0].attack_tactic == "Privilege Escalation");
    CHECK(accounts[0].defend_tactic == "Access Control");
    CHECK(accounts[0].defend_technique_id == "D3-T1021");
    CHECK(accounts[0].defend_technique_name == "User Account Management");

    const auto capture = pair_defense(cat, "T1056");
    REQUIRE(capture.size() == 1);
    CHECK(capture[0].attack_tactic == "Credential Access");
    CHECK(capture[0].defend_tactic == "User Training");
    CHECK(capture[0].defend_technique_id == "D3-T1023");
    CHECK(capture[0].defend_technique_name == "Security Awareness Training");

    CHECK(pair_defense(cat, "T9999").empty());
}

TEST_CASE("catalog validation") {
    SUBCASE("malformed attack id") {
        CHECK(parse_error_row(catalog_with("Initial Access,X999,Foo,User Training,D3-T1023,Bar,Yes"), false) == 2);
    }
    SUBCASE("malformed defend id") {
        CHECK(parse_error_row(catalog_with("Initial Access,T1189,Foo,User Training,D3-1023,Bar,Yes"), false) == 2);
    }
    SUBCASE("id with too many digits") {
        CHECK(parse_error_row(catalog_with("Initial Access,T11890,Foo,User Training,D3-T1023,Bar,Yes"), false) == 2);
    }
    SUBCASE("duplicate pairing reports the second row") {
        const auto text = catalog_with("A,T1189,Foo,B,D3-T1023,Bar,Yes\nA,T1200,Baz,B,D3-T1042,Qux,Yes\n"
                                       "A,T1189,Foo,B,D3-T1023,Bar,Yes");
        CHECK(parse_error_row(text, false) == 4);
    }
    SUBCASE("same attack, different defenses is fine") {
        const auto cat = parse_catalog(catalog_with("A,T1189,Foo,B,D3-T1023,Bar,Yes\nA,T1189,Foo,C,D3-T1042,Qux,No"));
        CHECK(pair_defense(cat, "T1189").size() == 2);
        CHECK(!cat[1].ultrasonic_applicable);
    }
    SUBCASE("wrong header") {
        CHECK(parse_error_row("a,b,c\n", false) == 1);
    }
    SUBCASE("short row") {
        CHECK(parse_error_row(catalog_with("A,T1189,Foo"), false) == 2);
    }
    SUBCASE("bad flag") {
        CHECK(parse_error_row(catalog_with("A,T1189,Foo,B,D3-T1023,Bar,maybe"), false) == 2);
    }
    SUBCASE("column is reported") {
        try {
            (void)parse_catalog(catalog_with("A,T1189,Foo,B,D3-T10x3,Bar,Yes"));
            FAIL("expected a parse error");
        } catch (const susbam::ParseError& e) {
            CHECK(e.column() == 5);
        }
    }
}

TEST_CASE("catalog round trip") {
    fixtures::TempDir dir;
    const auto cat = load_catalog(kData / "mitre_catalog.csv");
    save_catalog(cat, dir / "copy.csv");
    CHECK(load_catalog(dir / "copy.csv") == cat);
    CHECK(parse_catalog(catalog_to_csv(cat)) == cat);

    // fields that need quoting survive too
    std::vector<CatalogEntry> odd = {{"Tactic, with comma", "T0001", "Name \"quoted\"", "D", "D3-T0002", "x\ny", false}};
    CHECK(parse_catalog(catalog_to_csv(odd)) == odd);
}

TEST_CASE("bundled survey reproduces every row") {
    const auto records = load_survey(kData / "command_survey.csv");
    REQUIRE(records.size() == std::size(kSurvey));
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const auto& want = kSurvey[i];
        CAPTURE(want.id);
        CHECK(r.id == want.id);
        CHECK(r.command == want.command);
        CHECK(r.original_outcome == Outcome::success);
        switch (want.nuit) {
            case 'S': CHECK(r.nuit_outcome == Outcome::success); break;
            case 'F': CHECK(r.nuit_outcome == Outcome::fail); break;
            case 'T': CHECK(r.nuit_outcome == Outcome::trigger); break;
            case 'W': CHECK(r.nuit_outcome == Outcome::trigger); break;
        }
        CHECK(r.wrong_command == (want.nuit == 'W'));
    }
}

TEST_CASE("survey totals") {
    const auto totals = aggregate_survey(load_survey(kData / "command_survey.csv"));
    CHECK(totals.records == 50);

    CHECK(totals.nuit.fail_n == 8);
    CHECK(totals.nuit.trigger_n == 13);
    CHECK(totals.nuit.success_n == 29);
    CHECK(totals.nuit.fail_pct() == 16);
    CHECK(totals.nuit.trigger_pct() == 26);
    CHECK(totals.nuit.success_pct() == 58);
    CHECK(totals.nuit.success_fraction == 0.58);

    CHECK(totals.original.fail_n == 0);
    CHECK(totals.original.trigger_n == 0);
    CHECK(totals.original.success_n == 50);
    CHECK(totals.original.success_pct() == 100);
}

TEST_CASE("aggregate edge cases") {
    SUBCASE("single success") {
        const std::vector<CommandRecord> one = {{0, "Help", Outcome::success, Outcome::success, false}};
        const auto t = aggregate_survey(one);
        CHECK(t.nuit.fail_n == 0);
        CHECK(t.nuit.trigger_n == 0);
        CHECK(t.nuit.success_n == 1);
        CHECK(t.nuit.success_pct() == 100);
    }
    SUBCASE("empty input") {
        try {
            (void)aggregate_survey(std::vector<CommandRecord>{});
            FAIL("expected EmptyInput");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyInput);
        }
    }
    SUBCASE("counts always sum to the record count") {
        std::vector<CommandRecord> recs;
        const Outcome cycle[] = {Outcome::fail, Outcome::trigger, Outcome::success};
        for (int i = 0; i < 37; ++i) {
            recs.push_back({i, "c", cycle[i % 3], cycle[(i * 7) % 3], false});
            const auto t = aggregate_survey(recs);
            for (const auto* arm : {&t.original, &t.nuit}) {
                CHECK(arm->fail_n + arm->trigger_n + arm->success_n == recs.size());
                CHECK(arm->fail_fraction + arm->trigger_fraction + arm->success_fraction == doctest::Approx(1.0));
            }
        }
    }
    SUBCASE("percent display rounds half away from zero") {
        // 1 of 8 = 12.5%
        std::vector<CommandRecord> recs;
        for (int i = 0; i < 8; ++i) recs.push_back({i, "c", Outcome::success, i == 0 ? Outcome::fail : Outcome::success, false});
        CHECK(aggregate_survey(recs).nuit.fail_pct() == 13);
    }
}

TEST_CASE("survey validation") {
    CHECK(parse_error_row(survey_with("0,Help,success,success,no\n0,Again,success,success,no\n"), true) == 3);
    CHECK(parse_error_row(survey_with("50,Help,success,success,no\n"), true) == 2);
    CHECK(parse_error_row(survey_with("-1,Help,success,success,no\n"), true) == 2);
    CHECK(parse_error_row(survey_with("x,Help,success,success,no\n"), true) == 2);
    CHECK(parse_error_row(survey_with("0,Help,success,maybe,no\n"), true) == 2);
    // a wrong command is only meaningful in the trigger column
    CHECK(parse_error_row(survey_with("0,Help,success,success,yes\n"), true) == 2);
    CHECK(parse_error_row(survey_with("0,Help,success,fail,yes\n"), true) == 2);
    CHECK(parse_survey(survey_with("0,Help,success,trigger,yes\n")).at(0).wrong_command);
    CHECK(parse_error_row("id,command\n", true) == 1);
}

TEST_CASE("survey round trip") {
    const auto records = load_survey(kData / "command_survey.csv");
    CHECK(parse_survey(survey_to_csv(records)) == records);
}

TEST_CASE("missing data files are I/O errors") {
    try {
        (void)load_catalog("/nonexistent/catalog.csv");
        FAIL("expected IoFailure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoFailure);
    }
}

TEST_CASE("csv reader") {
    SUBCASE("quotes, escaped quotes and embedded newlines") {
        const auto rows = csv::parse("a,\"b,c\",\"say \"\"hi\"\"\"\n\"multi\nline\",x,\r\n");
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].fields == std::vector<std::string>{"a", "b,c", "say \"hi\""});
        CHECK(rows[1].fields == std::vector<std::string>{"multi\nline", "x", ""});
        CHECK(rows[0].line == 1);
        CHECK(rows[1].line == 2);
    }
    SUBCASE("byte-order mark and blank lines") {
        const auto rows = csv::parse("\xEF\xBB\xBFh1,h2\n\n1,2\n\n");
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].fields[0] == "h1");
        CHECK(rows[1].line == 3);
    }
    SUBCASE("unterminated quote") {
        try {
            (void)csv::parse("a,\"open\nb");
            FAIL("expected ParseError");
        } catch (const susbam::ParseError& e) {
            CHECK(e.row() == 1);
        }
    }
    SUBCASE("stray quote in a bare field") {
        CHECK_THROWS_AS(csv::parse("ab\"c,d\n"), susbam::ParseError);
    }
    SUBCASE("escape and join") {
        CHECK(csv::escape("plain") == "plain");
        CHECK(csv::escape("a,b") == "\"a,b\"");
        CHECK(csv::escape("q\"") == "\"q\"\"\"");
        CHECK(csv::join({"x", "y,z"}) == "x,\"y,z\"");
    }
}
