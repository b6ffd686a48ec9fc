#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include <eit/config.hpp>
#include <eit/csv.hpp>

using namespace eit;

namespace {

std::string error_of(const std::string& doc)
{
    try {
        load_config(doc);
    }
    catch (const config_error& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST(LoadConfig, PaperRatiosFromMinimalDocument)
{
    const auto cfg = load_config("gamma_ab = 1.0\n"
                                 "g_sqrt_n = 1.0\n"
                                 "delta_two_photon = 0.2\n");
    EXPECT_EQ(cfg.params.gamma_ab / cfg.params.g_sqrt_n, 1.0);
    EXPECT_EQ(cfg.params.delta_two_photon / cfg.params.g_sqrt_n, 0.2);
    // resonant probe, detuned coupling transition
    EXPECT_EQ(cfg.params.delta_ab, 0.0);
    EXPECT_EQ(cfg.params.delta_ac, 0.2);
    EXPECT_EQ(cfg.schedule.kind(), ScheduleKind::paper_tanh);
    EXPECT_EQ(cfg.dt, cfg.grid.dz());
    EXPECT_TRUE(cfg.warnings.empty());
}

TEST(LoadConfig, NegativeTimeStep)
{
    EXPECT_NE(error_of("gamma_ab = 1\ndt = -0.1\n").find("dt must be positive"),
              std::string::npos);
}

TEST(LoadConfig, MissingRequiredKeyIsNamed)
{
    const auto msg = error_of("g_sqrt_n = 1.0\n");
    EXPECT_NE(msg.find("missing"), std::string::npos);
    EXPECT_NE(msg.find("gamma_ab"), std::string::npos);
}

TEST(LoadConfig, MalformedLineReportsLineNumber)
{
    const auto msg = error_of("# header\ngamma_ab = 1\nthis line is broken\n");
    EXPECT_NE(msg.find("line 3"), std::string::npos);
}

TEST(LoadConfig, UnknownAndDuplicateKeysRejected)
{
    EXPECT_NE(error_of("gamma_ab = 1\ngamma_bc = 2\n").find("unknown key"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\ngamma_ab = 2\n").find("duplicate"),
              std::string::npos);
}

TEST(LoadConfig, CommentsAndWhitespace)
{
    const auto cfg = load_config("  # full comment\n\n"
                                 "gamma_ab=0.5   # trailing\n"
                                 "\tmode = weak-probe\r\n");
    EXPECT_EQ(cfg.params.gamma_ab, 0.5);
    EXPECT_EQ(cfg.mode, PropagationMode::weak_probe);
}

TEST(LoadConfig, InvariantViolationsAreNamed)
{
    EXPECT_NE(error_of("gamma_ab = 1\ng_sqrt_n = 0\n").find("g_sqrt_n"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\nn_points = 4\n").find("n_points"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\npulse.z0 = 5\n").find("pulse support"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\ndt = 0.01\n").find("c_light * dt"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\nsubsteps = 1\n").find("time step too"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\ndelta_ac = 0.1\ndelta_two_photon = 0.2\n")
                  .find("delta_two_photon"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\nrecord_times = 0, 0.001\n")
                  .find("record time"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\nschedule.kind = constant\n")
                  .find("schedule.theta"),
              std::string::npos);
    EXPECT_NE(error_of("gamma_ab = 1\nschedule.base = -10\n").find("cot"),
              std::string::npos);
}

TEST(LoadConfig, TimeStepGuardCanBeSkippedForAnalysis)
{
    ValidationOptions opts;
    opts.check_time_step = false;
    const auto cfg = load_config("gamma_ab = 1\nschedule.kind = constant\n"
                                 "schedule.theta = 0\n",
                                 opts);
    EXPECT_TRUE(std::isinf(cfg.schedule.cot_theta(3.0)));
    EXPECT_THROW(load_config("gamma_ab = 1\nschedule.kind = constant\n"
                             "schedule.theta = 0\n"),
                 config_error);
}

TEST(LoadConfig, StrongProbeWarns)
{
    const auto cfg = load_config("gamma_ab = 1\npulse.amplitude = 20\n");
    ASSERT_EQ(cfg.warnings.size(), 1u);
}

TEST(LoadConfig, OverridesReplaceEntries)
{
    auto entries = parse_config_entries("gamma_ab = 1\ndelta_two_photon = 0.1\n");
    entries = apply_overrides(entries, {"delta_two_photon=0.5", "mode = weak-probe"});
    const auto cfg = config_from_entries(entries);
    EXPECT_EQ(cfg.params.delta_two_photon, 0.5);
    EXPECT_EQ(cfg.mode, PropagationMode::weak_probe);
    EXPECT_THROW(apply_overrides(entries, {"bogus=1"}), config_error);
    EXPECT_THROW(apply_overrides(entries, {"no_equals"}), config_error);
}

// load_config(serialize(config)) reproduces every field bit-exactly.
TEST(LoadConfig, SerializeRoundTripProperty)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::uniform_real_distribution<double> s(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        SimulationConfig cfg;
        auto& p = cfg.params;
        p.g_sqrt_n = u(rng);
        p.gamma_ab = u(rng) / 3;
        p.gamma_a_to_b = u(rng) / 7;
        p.gamma_a_to_c = u(rng) / 11;
        p.gamma_ac = u(rng) / 13;
        p.delta_ab = s(rng) / 17;
        p.delta_ac = s(rng) / 19;
        p.delta_two_photon = p.delta_ac - p.delta_ab;
        p.n_atoms = u(rng);
        cfg.grid.n_points = 1024;
        cfg.dt = cfg.grid.dz();
        cfg.t_end = cfg.dt * 512;
        cfg.record_times = {0.0, cfg.dt * 100, cfg.t_end};
        cfg.substeps = 1 + trial % 8;
        cfg.pulse.z0 = 40.0 + s(rng);
        cfg.pulse.sigma_z = 2.0 + s(rng);
        cfg.pulse.amplitude = 1e-4 * u(rng);
        cfg.mode = trial % 2 ? PropagationMode::weak_probe
                             : PropagationMode::full_bloch;
        switch (trial % 3) {
        case 0: {
            TanhParameters tp;
            tp.base = 1.0 + u(rng);
            tp.amp1 = tp.base / 2;
            tp.amp2 = tp.base / 3;
            tp.rate1 = u(rng) / 9;
            cfg.schedule = ControlSchedule::paper_tanh(tp);
            break;
        }
        case 1:
            cfg.schedule = ControlSchedule::constant(u(rng) / 2);
            break;
        default:
            cfg.schedule = ControlSchedule::piecewise_linear_cot(
                {{0.0, u(rng)}, {3.3, u(rng)}, {7.1, u(rng)}});
        }

        ValidationOptions loose;
        loose.check_time_step = false;
        const auto back = load_config(serialize_config(cfg), loose);
        EXPECT_EQ(serialize_config(back), serialize_config(cfg));
        EXPECT_EQ(back.params.gamma_ab, p.gamma_ab);
        EXPECT_EQ(back.params.delta_two_photon, p.delta_two_photon);
        EXPECT_EQ(back.params.n_atoms, p.n_atoms);
        EXPECT_EQ(back.pulse.sigma_z, cfg.pulse.sigma_z);
        EXPECT_EQ(back.record_times, cfg.record_times);
        EXPECT_EQ(back.substeps, cfg.substeps);
        EXPECT_EQ(back.mode, cfg.mode);
        EXPECT_EQ(back.schedule.kind(), cfg.schedule.kind());
        EXPECT_EQ(back.schedule.cot_theta(1.7), cfg.schedule.cot_theta(1.7));
    }
}

TEST(WriteCsv, HeaderAndOneRow)
{
    CsvTable t{{"t", "intensity"}, {{0.0, 1.0}}};
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "t,intensity\n"
                        "0.0000000000000000e+00,1.0000000000000000e+00\n");
}

TEST(WriteCsv, EmptyRowsGiveHeaderOnly)
{
    CsvTable t{{"t", "intensity"}, {}};
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "t,intensity\n");
}

TEST(WriteCsv, ArityMismatch)
{
    CsvTable t{{"t", "intensity"}, {{0.0, 1.0, 2.0}}};
    std::ostringstream os;
    EXPECT_THROW(write_csv(os, t), std::invalid_argument);
}

TEST(WriteCsv, SeventeenSignificantDigitsRoundTrip)
{
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(-1.0 / 3.0), "-3.3333333333333331e-01");
}

TEST(WriteCsv, UnwritablePath)
{
    CsvTable t{{"a"}, {}};
    EXPECT_THROW(write_csv(t, "/nonexistent-dir/x.csv"), io_error);
}

TEST(Grid, SpacingAndPeriodicIndexing)
{
    Grid g{0.0, 160.0, 8192};
    EXPECT_EQ(g.dz(), 0.01953125);
    EXPECT_EQ(g.z(8191) + g.dz(), g.z_max);
    Grid bad{0.0, 1.0, 4};
    EXPECT_THROW(bad.validate(), config_error);
}
