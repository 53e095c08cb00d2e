#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "hmdrec/data/dataset_io.hpp"
#include "hmdrec/error.hpp"
#include "hmdrec/harness/cli.hpp"
#include "hmdrec/harness/compare.hpp"
#include "hmdrec/harness/report.hpp"
#include "hmdrec/model/weights_io.hpp"

using namespace hmdrec;
using namespace hmdrec::harness;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("hmdrec-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

}  // namespace

TEST_CASE("config digest is stable FNV-1a") {
    CHECK(config_digest("") == "cbf29ce484222325");
    CHECK(config_digest("a") == "af63dc4c8601ec8c");
    CHECK(config_digest("a") != config_digest("b"));
    CHECK(config_digest("x").size() == 16);
}

TEST_CASE("identity confusion renders as identity proportions") {
    ConfusionMatrix m{};
    for (std::size_t i = 0; i < model::kNumClasses; ++i) m[i][i] = 7;
    std::vector<ClassLabel> empty;
    const Proportions p = normalize_columns(m, &empty);
    CHECK(empty.empty());
    for (std::size_t i = 0; i < model::kNumClasses; ++i) {
        for (std::size_t j = 0; j < model::kNumClasses; ++j) CHECK(p[i][j] == (i == j ? 1.0 : 0.0));
    }
    const RenderedConfusion r = render_confusion(m);
    CHECK(r.warnings.empty());
    CHECK(r.text.find("1.000") != std::string::npos);
}

TEST_CASE("column proportions sum to one and empty columns warn") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> count(0, 50);
    ConfusionMatrix m{};
    for (auto& row : m) {
        for (auto& c : row) c = count(rng);
    }
    const std::size_t empty_col = static_cast<std::size_t>(model::index_of(ClassLabel::Shaking));
    for (auto& row : m) row[empty_col] = 0;
    std::vector<ClassLabel> empty;
    const Proportions p = normalize_columns(m, &empty);
    for (std::size_t j = 0; j < model::kNumClasses; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < model::kNumClasses; ++i) sum += p[i][j];
        if (j == empty_col) {
            CHECK(sum == 0.0);
        } else {
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
    REQUIRE(empty.size() == 1);
    CHECK(empty[0] == ClassLabel::Shaking);
    const RenderedConfusion r = render_confusion(m);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("Shaking") != std::string::npos);
    CHECK(r.text.find("nan") == std::string::npos);

    const std::string csv = render_confusion_csv(m, model::all_classes());
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 18 * 18);
}

TEST_CASE("class metrics and run report invariants") {
    ConfusionMatrix m{};
    m[0][0] = 8;  // [pred][true]
    m[1][0] = 2;
    m[1][1] = 5;
    const std::vector<ClassLabel> cls{ClassLabel::BeingIdle, ClassLabel::SteppingInPlace, ClassLabel::Jumping};
    const auto metrics = class_metrics(m, cls);
    REQUIRE(metrics.size() == 3);
    CHECK(metrics[0].support == 10);
    CHECK(*metrics[0].recall == doctest::Approx(0.8));
    CHECK(*metrics[0].precision == doctest::Approx(1.0));
    CHECK(*metrics[1].precision == doctest::Approx(5.0 / 7.0));
    CHECK_FALSE(metrics[2].recall.has_value());
    CHECK_FALSE(metrics[2].precision.has_value());

    RunReport rep;
    rep.command = "eval";
    rep.seed = 3;
    rep.config_digest = config_digest("x");
    model::Evaluation ev;
    ev.confusion = m;
    ev.total = 15;
    ev.accuracy = 13.0 / 15.0;
    rep.evaluation = ev;
    rep.classes = cls;
    const std::string text = rep.to_text();
    CHECK(text.find(rep.config_digest) != std::string::npos);
    CHECK(text == rep.to_text());
    CHECK(rep.to_csv().find(rep.config_digest) != std::string::npos);
    CHECK(fixed(0.5, 3) == "0.500");
}

TEST_CASE("comparison table helpers") {
    ComparisonTable t;
    t.rows.push_back({"HMM", "body", "LinearVel", 0.9, "K=16 N=3"});
    t.rows.push_back({"1D-CNN", "body", "LinearVel", 0.95, ""});
    CHECK_NOTHROW(t.validate());
    REQUIRE(t.find("HMM", "body", "LinearVel") != nullptr);
    CHECK(t.find("HMM", "head", "LinearVel") == nullptr);
    CHECK(t.to_csv().find("HMM,body,LinearVel,0.900000,K=16 N=3") != std::string::npos);
    t.rows.push_back({"HMM", "head", "AngVel", 1.5, ""});
    CHECK_THROWS_AS(t.validate(), NumericError);

    const auto cells = comparison_cells();
    REQUIRE(cells.size() == 6);
    CHECK(streams_name(cells[2].groups) == "LinearVel+LinearAcc");
    CHECK(streams_name(cells[5].groups) == "AngVel+AngAcc");
    CHECK(cells[3].classes == model::head_gestures());

    CompareConfig cc;
    cc.batch_size = 100;
    cc.epochs = 7;
    CHECK(epochs_for(1000, cc) == 7);
    cc.budget_steps = 25;
    CHECK(epochs_for(1000, cc) == 3);
    CHECK(epochs_for(50, cc) == 25);
    const auto& windows = fixture::small_split().test;
    const auto thin = every_nth(windows, 10);
    CHECK(thin.size() == (windows.size() + 9) / 10);
    CHECK(&thin[1].trial() == &windows[10].trial());
    CHECK_THROWS_AS(every_nth(windows, 0), ConfigError);
}

TEST_CASE("cli exit codes") {
    TempDir dir("codes");
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"generate"}).code == 2);
    CHECK(cli({"generate", "--out", dir / "d.txt", "--subjects", "x"}).code == 2);
    CHECK(cli({"eval", "--data", dir / "missing.txt", "--weights", dir / "w.bin"}).code == 3);
    {
        std::ofstream(dir / "bad.txt") << "not a dataset\n";
        std::ofstream(dir / "junk.bin") << "junk";
    }
    model::save_weights(model::init_weights(model::NetworkConfig::two_stream(), 1), dir / "w.bin");
    CHECK(cli({"eval", "--data", dir / "bad.txt", "--weights", dir / "w.bin"}).code == 4);
    CHECK(cli({"eval", "--data", dir / "bad.txt", "--weights", dir / "junk.bin"}).code == 4);
    CHECK(cli({"train", "--data", dir / "bad.txt", "--out", dir / "o.bin", "--lr", "-1"}).code == 5);
    {
        std::ofstream(dir / "gen.cfg") << "no_such_key = 1\n";
    }
    CHECK(cli({"generate", "--out", dir / "d.txt", "--config", dir / "gen.cfg"}).code == 5);
    CHECK(cli({"generate", "--out", dir / "no-such-dir/d.txt", "--subjects", "1"}).code == 3);
}

TEST_CASE("cli generate is byte-identical for a fixed seed") {
    TempDir dir("gen");
    const auto a = cli({"generate", "--out", dir / "a.txt", "--subjects", "1", "--seed", "7"});
    const auto b = cli({"generate", "--out", dir / "b.txt", "--subjects", "1", "--seed", "7"});
    const auto c = cli({"generate", "--out", dir / "c.txt", "--subjects", "1", "--seed", "8"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(dir / "a.txt") == slurp(dir / "b.txt"));
    CHECK(slurp(dir / "a.txt") != slurp(dir / "c.txt"));
    CHECK(data::read_dataset(fs::path(dir / "a.txt")).size() == 18 * 4);
}

TEST_CASE("cli eval on a single-class stub scores perfectly with an identity confusion") {
    TempDir dir("eval");
    std::vector<data::Trial> idle;
    for (const auto& t : fixture::small_cohort()) {
        if (t.label == ClassLabel::BeingIdle) idle.push_back(t);
    }
    data::write_dataset(idle, fs::path(dir / "idle.txt"));
    auto cfg = model::NetworkConfig::two_stream();
    cfg.classes = {ClassLabel::BeingIdle};
    model::save_weights(model::init_weights(cfg, 1), dir / "stub.bin");

    const auto r = cli({"eval", "--data", dir / "idle.txt", "--weights", dir / "stub.bin", "--csv", dir / "r.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("accuracy\t1.000000") != std::string::npos);
    const std::string csv = slurp(dir / "r.csv");
    CHECK(csv.find("BeingIdle,BeingIdle,") != std::string::npos);
    const auto again = cli({"eval", "--data", dir / "idle.txt", "--weights", dir / "stub.bin"});
    CHECK(again.out == r.out);
}

TEST_CASE("cli stream writes one line per sample") {
    TempDir dir("stream");
    auto cfg = model::NetworkConfig::two_stream();
    model::save_weights(model::init_weights(cfg, 2), dir / "w.bin");
    std::vector<data::Trial> one{fixture::small_cohort()[5]};
    std::ostringstream text;
    data::write_dataset(one, text);
    const auto r = cli({"stream", "--weights", dir / "w.bin"}, text.str());
    REQUIRE(r.code == 0);
    CHECK(static_cast<std::size_t>(std::count(r.out.begin(), r.out.end(), '\n')) == one[0].samples.size());
    CHECK(r.out.rfind("0\tInvalid\t-1\n", 0) == 0);
    const auto b = cli({"stream", "--weights", dir / "w.bin", "--batched"}, text.str());
    CHECK(b.out == r.out);
}
