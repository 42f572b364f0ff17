#include <catch_amalgamated.hpp>

#include <fstream>

#include "coevo/classify/ground_truth.hpp"
#include "coevo/error.hpp"
#include "coevo/pipeline/analysis.hpp"
#include "coevo/pipeline/csv.hpp"
#include "coevo/pipeline/dataset.hpp"
#include "coevo/pipeline/jsonl.hpp"
#include "coevo/pipeline/stages.hpp"
#include "coevo/vcs/replay.hpp"
#include "corpus.hpp"
#include "git_fixture.hpp"
#include "temp_dir.hpp"

using namespace coevo;
using namespace coevo::pipeline;
namespace ct = coevo::testing;
using classify::MaintenanceActivity;
using distill::ChangeType;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

vcs::CommitRecord make_commit(std::string id, std::vector<vcs::FileDelta> deltas) {
    vcs::CommitRecord c;
    c.commit_id = std::move(id);
    c.author_id = "dev <dev@example.com>";
    c.timestamp = 1700000000;
    c.message = "change";
    c.file_deltas = std::move(deltas);
    return c;
}

vcs::FileDelta delta(std::string path, std::optional<std::string> before, std::optional<std::string> after) {
    vcs::FileDelta d;
    d.path = std::move(path);
    d.before_source = std::move(before);
    d.after_source = std::move(after);
    return d;
}

testdetect::TestMaintenanceProfile profile_of(int ma, int mr, int mu, int ca, int cr, int cu) {
    return {ma, mr, mu, ca, cr, cu, ma + mr + mu + ca + cr + cu};
}

CommitObservation obs(std::string project, std::string author, MaintenanceActivity a, int total) {
    CommitObservation o;
    o.project = std::move(project);
    o.commit_id = o.project + "-" + std::to_string(total) + "-" + std::string(classify::to_string(a));
    o.author_id = std::move(author);
    o.activity = a;
    o.profile.method_updated = total;
    o.profile.total = total;
    return o;
}

}  // namespace

TEST_CASE("number formatting and csv quoting", "[pipeline]") {
    CHECK(format_number(0.25) == "0.25");
    CHECK(format_number(3) == "3");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    CHECK(format_number(-2.5e-12) == "-2.5e-12");
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("csv round trip", "[pipeline]") {
    ct::TempDir tmp;
    CsvTable t;
    t.header = {"id", "message", "value"};
    t.rows = {{"a1", "fix, then \"test\"", "0.5"}, {"b2", "multi\nline", ""}, {"c3", "", "-1"}};
    write_csv(tmp.path() / "t.csv", t);
    auto back = read_csv(tmp.path() / "t.csv");
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK(back.column("value") == 2);
    CHECK_THROWS_AS(back.column("missing"), InvalidInput);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), InvalidInput);
}

TEST_CASE("jsonl round trip of commits and changes", "[pipeline]") {
    ct::TempDir tmp;
    auto c = make_commit("abc", {delta("src/A.java", std::nullopt, "class A {}\n"),
                                 delta("src/B.java", "class B {}\n", std::nullopt)});
    c.message = "line one\nline \"two\"";
    distill::SourceChange ch;
    ch.change_type = ChangeType::StatementUpdate;
    ch.entity_kind = java::EntityKind::Statement;
    ch.entity_name = "x = 1 ;";
    ch.parent_qualified_name = "A.run";
    ch.file_path = "src/A.java";
    ch.commit_id = "abc";
    ch.enclosing_class = "A";
    ch.enclosing_method = "run";
    ch.test_annotated = true;

    write_jsonl(tmp.path() / "c.jsonl", {to_json(c), to_json(ch)});
    auto records = read_jsonl(tmp.path() / "c.jsonl");
    REQUIRE(records.size() == 2);
    auto c2 = commit_from_json(records[0]);
    CHECK(c2.commit_id == c.commit_id);
    CHECK(c2.message == c.message);
    CHECK(c2.file_deltas.size() == 2);
    CHECK_FALSE(c2.file_deltas[0].before_source.has_value());
    CHECK(*c2.file_deltas[0].after_source == "class A {}\n");
    CHECK_FALSE(c2.file_deltas[1].after_source.has_value());
    CHECK(change_from_json(records[1]) == ch);
}

TEST_CASE("malformed jsonl names file and line", "[pipeline]") {
    ct::TempDir tmp;
    auto p = tmp.path() / "bad.jsonl";
    std::ofstream(p) << "{\"a\": 1}\n{broken\n";
    try {
        read_jsonl(p);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        std::string msg = e.what();
        CHECK(msg.find("bad.jsonl") != std::string::npos);
        CHECK(msg.find(":2") != std::string::npos);
    }
}

TEST_CASE("test path rule", "[pipeline]") {
    CHECK(is_test_path("src/test/CalcTest.java"));
    CHECK(is_test_path("TestCalc.java"));
    CHECK(is_test_path("a/b/CalcTests.java"));
    CHECK(is_test_path("CalcTestCase.java"));
    CHECK_FALSE(is_test_path("src/test/Helper.java"));
    CHECK_FALSE(is_test_path("Contest.java"));
}

TEST_CASE("analyze_commit separates test and production files", "[pipeline]") {
    auto c = make_commit("c1", {delta("src/Calc.java", "class Calc { int f() { return 1; } }\n",
                                      "class Calc { int f() { return 2; } }\n"),
                                delta("src/CalcTest.java", std::nullopt,
                                      "class CalcTest { @Test void t() { check(); } }\n"),
                                delta("src/Broken.java", std::nullopt, "class Broken { void f( }\n")});
    auto a = analyze_commit(c);
    REQUIRE(a.files.size() == 3);
    CHECK(a.commit_id == "c1");
    int broken = 0;
    for (const auto& f : a.files) {
        if (f.path == "src/Broken.java") {
            ++broken;
            CHECK_FALSE(f.distilled);
            CHECK_FALSE(f.error.empty());
        }
        if (f.path == "src/CalcTest.java") CHECK(f.test_file);
        if (f.path == "src/Calc.java") CHECK_FALSE(f.test_file);
    }
    CHECK(broken == 1);
    for (const auto& ch : a.changes) CHECK(ch.file_path != "src/Broken.java");

    auto prod = production_changes(a);
    REQUIRE(prod.size() == 1);
    CHECK(prod[0].change_type == ChangeType::StatementUpdate);
    auto profile = testdetect::derive_profile(a.changes);
    CHECK(profile == profile_of(1, 0, 0, 1, 0, 0));
    CHECK_FALSE(is_test_only(a));
}

TEST_CASE("test-only commits are excluded, zero totals kept", "[pipeline]") {
    std::vector<CommitInput> inputs(2);
    inputs[0].project = "p";
    inputs[0].commit_id = "t";
    inputs[0].analysis = analyze_commit(make_commit(
        "t", {delta("FooTest.java", "class FooTest { @Test void a() { x(); } }\n",
                    "class FooTest { @Test void a() { y(); } }\n")}));
    inputs[1].project = "p";
    inputs[1].commit_id = "z";
    inputs[1].analysis = analyze_commit(
        make_commit("z", {delta("Foo.java", "class Foo { void a() { x(); } }\n",
                                "class Foo { void a() { y(); } }\n")}));
    CHECK(is_test_only(inputs[0].analysis));
    CHECK_FALSE(is_test_only(inputs[1].analysis));

    auto ds = build_commit_dataset(inputs);
    CHECK(ds.input_commits == 2);
    CHECK(ds.test_only_excluded == 1);
    CHECK(ds.outlier_excluded == 0);
    REQUIRE(ds.observations.size() == 1);
    CHECK(ds.observations[0].commit_id == "z");
    CHECK(ds.observations[0].profile.total == 0);
    CHECK(ds.observations[0].change_type_counts[static_cast<std::size_t>(ChangeType::StatementUpdate)] == 1);
}

TEST_CASE("outlier fence drops the extreme total", "[pipeline]") {
    // Positive totals 1..10 and one 500. The adjusted fence on this sample is
    // far below 500 and above 10 for any medcouple in [-1, 1].
    std::vector<CommitInput> inputs;
    auto make = [&](int i, int n_methods) {
        std::string body;
        for (int k = 0; k < n_methods; ++k) body += "@Test void test" + std::to_string(k) + "() { } ";
        CommitInput in;
        in.project = "p";
        in.commit_id = "c" + std::to_string(i);
        in.analysis = analyze_commit(make_commit(
            in.commit_id, {delta("Foo.java", "class Foo { void a() { x(); } }\n",
                                 "class Foo { void a() { y(); } }\n"),
                           delta("Foo" + std::to_string(i) + "Test.java", std::nullopt,
                                 "class Foo" + std::to_string(i) + "Test { " + body + "}\n")}));
        inputs.push_back(std::move(in));
    };
    for (int i = 0; i < 10; ++i) make(i, i);  // totals 1 (class) + i methods
    make(10, 499);
    auto ds = build_commit_dataset(inputs);
    CHECK(ds.outlier_excluded == 1);
    CHECK(ds.observations.size() == 10);
    REQUIRE(ds.fences.size() == 1);
    CHECK(ds.fences[0].scope == "pooled");
    CHECK(ds.fences[0].positive == 11);
    CHECK(ds.fences[0].upper_fence > 10);
    CHECK(ds.fences[0].upper_fence < 500);
    for (std::size_t i = 0; i < ds.observations.size(); ++i) CHECK(ds.observations[i].commit_id == "c" + std::to_string(i));

    DatasetOptions per;
    per.per_project_fence = true;
    auto ds2 = build_commit_dataset(inputs, per);
    REQUIRE(ds2.fences.size() == 1);
    CHECK(ds2.fences[0].scope == "p");
}

TEST_CASE("project dataset aggregates activities", "[pipeline]") {
    ProjectInput p;
    p.project_id = "solo";
    p.stats.java_commit_count = 1;
    p.stats.loc = 10;
    p.head = {3, 1};
    p.activities = {MaintenanceActivity::Adaptive};
    auto rows = build_project_dataset(std::vector<ProjectInput>{p});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].adaptive == 1);
    CHECK(rows[0].corrective == 0);
    CHECK(rows[0].test_methods == 3);
    CHECK(rows[0].test_classes == 1);

    p.stats.java_commit_count = 2;
    CHECK_THROWS_AS(build_project_dataset(std::vector<ProjectInput>{p}), InvalidInput);
}

TEST_CASE("proportions by activity", "[pipeline]") {
    std::vector<CommitObservation> o{obs("p", "a", MaintenanceActivity::Corrective, 2),
                                     obs("p", "a", MaintenanceActivity::Corrective, 0),
                                     obs("p", "b", MaintenanceActivity::Corrective, 0),
                                     obs("p", "b", MaintenanceActivity::Corrective, 0),
                                     obs("q", "a", MaintenanceActivity::Perfective, 1)};
    auto rows = proportions_by_activity(o, GroupBy::Project);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == ProportionRow{"p", MaintenanceActivity::Corrective, 4, 1, 0.25});
    CHECK(rows[1] == ProportionRow{"q", MaintenanceActivity::Perfective, 1, 1, 1.0});

    auto dev = proportions_by_activity(o, GroupBy::Developer);
    REQUIRE(dev.size() == 3);
    CHECK(dev[0] == ProportionRow{"a", MaintenanceActivity::Corrective, 2, 1, 0.5});
    CHECK(dev[1] == ProportionRow{"a", MaintenanceActivity::Perfective, 1, 1, 1.0});
    CHECK(dev[2] == ProportionRow{"b", MaintenanceActivity::Corrective, 2, 0, 0.0});
}

TEST_CASE("dataset tables round trip", "[pipeline]") {
    std::vector<CommitObservation> o{obs("p", "dev, \"x\"", MaintenanceActivity::Adaptive, 3),
                                     obs("q", "y", MaintenanceActivity::Corrective, 0)};
    o[0].change_type_counts[4] = 7;
    o[0].profile = profile_of(1, 0, 0, 2, 0, 0);
    CHECK(commits_from_table(commits_table(o)) == o);

    ProjectObservation p;
    p.project_id = "p";
    p.stats = {1234, 3, 400, 25};
    p.corrective = 5;
    p.perfective = 12;
    p.adaptive = 8;
    p.test_methods = 40;
    p.test_classes = 6;
    std::vector<ProjectObservation> ps{p};
    CHECK(projects_from_table(projects_table(ps)) == ps);

    std::vector<ProfileRow> pr{{"abc", profile_of(1, 2, 3, 0, 1, 0)}, {"def", {}}};
    auto t = profiles_table(pr);
    CHECK(t.header.size() == 9);
    CHECK(t.rows[0].back() == "TRUE");
    CHECK(t.rows[1].back() == "FALSE");
    auto back = profiles_from_table(t);
    REQUIRE(back.size() == 2);
    CHECK(back[0].commit_id == "abc");
    CHECK(back[0].profile == pr[0].profile);
    CHECK(back[1].profile == pr[1].profile);
}

TEST_CASE("scripted history gives hand-traced observations", "[pipeline]") {
    ct::TempDir tmp;
    ct::GitFixture g(tmp.path() / "hand");
    const std::int64_t t0 = 1700000000;
    ct::Author alice{"Alice", "alice@example.com"};
    ct::Author bob{"Bob", "BOB@example.com"};

    const std::string calc1 =
        "public class Calc {\n    public int add(int a, int b) {\n        return a + b;\n    }\n}\n";
    const std::string calc2 =
        "public class Calc {\n    public int add(int a, int b) {\n        return b + a;\n    }\n}\n";
    const std::string calc5 =
        "public class Calc {\n    public int add(int a, int b) {\n        return b + a;\n    }\n"
        "    public int sub(int a, int b) {\n        return a - b;\n    }\n}\n";
    const std::string calc6 =
        "public class Calc {\n    private int last;\n    public int add(int a, int b) {\n        return b + a;\n    }\n"
        "    public int sub(int a, int b) {\n        return a - b;\n    }\n}\n";
    const std::string calc7 =
        "public class Calc {\n    private int last;\n    public int add(int a, int b) {\n        last = a;\n"
        "        return b + a;\n    }\n    public int sub(int a, int b) {\n        return a - b;\n    }\n}\n";
    const std::string calc9 =
        "public class Calc {\n    private int last;\n    public int add(int a, int b) {\n        last = a;\n"
        "        return b + a;\n    }\n    public int sub(int a, int b, int c) {\n        return a - b;\n    }\n}\n";
    const std::string test1 =
        "import org.junit.Test;\npublic class CalcTest {\n    @Test\n    public void testAdd() {\n"
        "        check(new Calc().add(1, 2));\n    }\n}\n";
    const std::string test3 =
        "import org.junit.Test;\npublic class CalcTest {\n    @Test\n    public void testAdd() {\n"
        "        check(new Calc().add(1, 2));\n        check(new Calc().add(2, 2));\n    }\n}\n";
    const std::string test5 =
        "import org.junit.Test;\npublic class CalcTest {\n    @Test\n    public void testAdd() {\n"
        "        check(new Calc().add(1, 2));\n        check(new Calc().add(2, 2));\n    }\n"
        "    @Test\n    public void testSub() {\n        check(new Calc().sub(3, 1));\n    }\n}\n";
    const std::string test6 =
        "import org.junit.Test;\npublic class CalcTest {\n    @Before\n    public void setUp() {\n        reset();\n    }\n"
        "    @Test\n    public void testAdd() {\n"
        "        check(new Calc().add(1, 2));\n        check(new Calc().add(2, 2));\n    }\n"
        "    @Test\n    public void testSub() {\n        check(new Calc().sub(3, 1));\n    }\n}\n";
    const std::string test7 =
        "import org.junit.Test;\npublic class CalcTest {\n    @Before\n    public void setUp() {\n        reset();\n"
        "        prepare();\n    }\n"
        "    @Test\n    public void testAdd() {\n"
        "        check(new Calc().add(1, 2));\n        check(new Calc().add(2, 2));\n    }\n"
        "    @Test\n    public void testSub() {\n        check(new Calc().sub(3, 1));\n    }\n}\n";

    g.write("src/Calc.java", calc1);
    g.write("test/CalcTest.java", test1);
    g.commit("initial calculator", t0, alice);
    g.write("src/Calc.java", calc2);
    g.commit("swap operands", t0 + 86400, alice);
    g.write("test/CalcTest.java", test3);
    g.commit("more asserts", t0 + 2 * 86400, bob);
    g.write("README.md", "calc\n");
    g.commit("docs", t0 + 3 * 86400, bob);
    g.write("src/Calc.java", calc5);
    g.write("test/CalcTest.java", test5);
    g.commit("add sub", t0 + 4 * 86400, alice);
    g.write("src/Calc.java", calc6);
    g.write("test/CalcTest.java", test6);
    g.commit("state and fixture", t0 + 5 * 86400, alice);
    g.write("src/Calc.java", calc7);
    g.write("test/CalcTest.java", test7);
    g.commit("remember last", t0 + 6 * 86400, bob);
    g.remove("test/CalcTest.java");
    g.commit("drop tests", t0 + 7 * 86400, bob);
    g.write("src/Calc.java", calc9);
    g.write("src/Broken.java", "public class Broken {\n    void f( {\n}\n");
    g.write("README.md", "calc v2\n");
    g.commit("wip", t0 + 8 * 86400, alice);
    g.write("test/TestUtil.java", "public class TestUtil {\n    static void helper() {\n    }\n}\n");
    g.commit("test helper", t0 + 10 * 86400, alice);

    Workspace ws{tmp.path() / "out"};
    Project project{"hand", g.dir()};
    run_mine(ws, project);
    run_distill(ws, "hand");
    run_detect(ws, "hand");

    auto summary = load_project_summary(ws, "hand");
    CHECK(summary.stats.java_commit_count == 9);
    CHECK(summary.stats.developers == 2);
    CHECK(summary.stats.age_days == 10);
    CHECK(summary.head == testdetect::HeadTestCounts{0, 1});
    CHECK(summary.stats.loc == 10 + 3 + 4);
    REQUIRE(summary.diagnostics.size() == 1);
    CHECK(summary.diagnostics[0].find("Broken.java") != std::string::npos);

    auto profiles = profiles_from_table(read_csv(ws.project_dir("hand") / "profiles.csv"));
    REQUIRE(profiles.size() == 9);
    std::vector<testdetect::TestMaintenanceProfile> expected{
        profile_of(1, 0, 0, 1, 0, 0),  // CalcTest added with testAdd
        profile_of(0, 0, 0, 0, 0, 0),  // production update
        profile_of(0, 0, 1, 0, 0, 0),  // testAdd body grows
        profile_of(1, 0, 0, 0, 0, 0),  // testSub added
        profile_of(0, 0, 0, 0, 0, 0),  // setUp is not a test method
        profile_of(0, 0, 0, 0, 0, 1),  // setUp body grows
        profile_of(0, 2, 0, 0, 1, 0),  // CalcTest deleted
        profile_of(0, 0, 0, 0, 0, 0),  // Broken.java not distilled
        profile_of(0, 0, 0, 1, 0, 0),  // TestUtil added, helper is not a test
    };
    for (std::size_t i = 0; i < expected.size(); ++i) {
        INFO("commit " << i);
        CHECK(profiles[i].profile == expected[i]);
    }

    auto commits = load_commits(ws, "hand");
    auto analyses = load_analyses(ws, "hand", commits);
    REQUIRE(analyses.size() == 9);
    std::vector<CommitInput> inputs;
    for (std::size_t i = 0; i < commits.size(); ++i) {
        inputs.push_back({"hand", commits[i].commit_id, commits[i].author_id, MaintenanceActivity::Perfective,
                          analyses[i]});
    }
    auto ds = build_commit_dataset(inputs);
    CHECK(ds.test_only_excluded == 3);
    CHECK(ds.outlier_excluded == 0);
    REQUIRE(ds.observations.size() == 6);
    std::vector<std::size_t> kept{0, 1, 3, 4, 5, 7};
    std::vector<int> totals{2, 0, 1, 0, 1, 0};
    auto idx = [](ChangeType t) { return static_cast<std::size_t>(t); };
    std::vector<std::pair<ChangeType, int>> prod{{ChangeType::AdditionalFunctionality, 1},
                                                 {ChangeType::StatementUpdate, 1},
                                                 {ChangeType::AdditionalFunctionality, 1},
                                                 {ChangeType::AdditionalObjectState, 1},
                                                 {ChangeType::StatementInsert, 1},
                                                 {ChangeType::ParameterInsert, 1}};
    for (std::size_t i = 0; i < kept.size(); ++i) {
        INFO("row " << i);
        const auto& o = ds.observations[i];
        CHECK(o.commit_id == commits[kept[i]].commit_id);
        CHECK(o.profile.total == totals[i]);
        int sum = 0;
        for (int v : o.change_type_counts) sum += v;
        CHECK(o.change_type_counts[idx(prod[i].first)] == prod[i].second);
        // the initial commit also adds the Calc class
        CHECK(sum == (i == 0 ? 2 : 1));
    }
    CHECK(ds.observations[0].change_type_counts[idx(ChangeType::AdditionalClass)] == 1);
    CHECK(ds.observations[2].author_id == "alice <alice@example.com>");
    CHECK(ds.observations[4].author_id == "bob <bob@example.com>");

    // Rebuilding from the repository directly gives the same rows.
    auto history = vcs::enumerate_commits(g.dir());
    std::vector<CommitInput> direct;
    for (const auto& c : history.commits) {
        direct.push_back({"hand", c.commit_id, c.author_id, MaintenanceActivity::Perfective, analyze_commit(c)});
    }
    CHECK(build_commit_dataset(direct).observations == ds.observations);
}

TEST_CASE("stages require their inputs", "[pipeline]") {
    ct::TempDir tmp;
    Workspace ws{tmp.path() / "out"};
    try {
        run_distill(ws, "nothing");
        FAIL("expected StageError");
    } catch (const StageError& e) {
        CHECK(std::string(e.what()).find("mine") != std::string::npos);
    }
    CHECK_THROWS_AS(run_detect(ws, "nothing"), StageError);
    CHECK_THROWS_AS(run_dataset(ws, {"nothing"}, {}), StageError);
}

TEST_CASE("rerunning stages reproduces checkpoints", "[pipeline]") {
    ct::TempDir tmp;
    auto corpus = ct::build_synthetic_corpus(tmp.path() / "corpus");
    auto projects = name_projects(read_repo_list(corpus.repo_list));
    REQUIRE(projects.size() == 3);
    auto gt = classify::read_ground_truth(corpus.ground_truth);

    auto run_all = [&](const std::filesystem::path& root) {
        Workspace ws{root};
        std::vector<std::string> ids;
        for (const auto& p : projects) {
            run_mine(ws, p);
            run_distill(ws, p.id);
            run_detect(ws, p.id);
            ids.push_back(p.id);
        }
        run_classify(ws, ids, gt, {});
        return run_dataset(ws, ids, {});
    };
    auto a = run_all(tmp.path() / "a");
    auto b = run_all(tmp.path() / "b");
    CHECK(a.observations == b.observations);
    CHECK(a.input_commits == corpus.commit_ids.size());
    for (const auto* name : {"dataset/commits.csv", "dataset/projects.csv", "dataset/exclusions.csv",
                             "dataset/fences.csv", "model/classifier.json"}) {
        INFO(name);
        CHECK(slurp(tmp.path() / "a" / name) == slurp(tmp.path() / "b" / name));
    }
    for (const auto& p : projects) {
        for (const auto* f : {"commits.jsonl", "changes.jsonl", "files.jsonl", "profiles.csv", "activities.csv"}) {
            INFO(p.id << "/" << f);
            CHECK(slurp(tmp.path() / "a" / "projects" / p.id / f) == slurp(tmp.path() / "b" / "projects" / p.id / f));
        }
    }
}
