#include <gtest/gtest.h>

#include <fstream>

#include "bridgesim/sim/simulator.hpp"
#include "support.hpp"

using namespace bridgesim;
using namespace bridgesim::test;

namespace {

json fixture(const std::string& name)
{
    std::ifstream in(std::string(BRIDGESIM_SCENARIO_DIR) + "/" + name);
    return json::parse(in);
}

RunResult run(const json& j, RunOptions opts = {}) { return run_scenario(scenario_from_json(j), opts); }

const json& side0(const RunResult& r) { return r.summary["side_chains"][0]; }

std::string diag_text(const json& j)
{
    try {
        scenario_from_json(j);
    } catch (const ScenarioInvalid& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Simnet, HappyPathEndState)
{
    json j = fixture("happy_path.json");
    RunResult r = run(j);
    EXPECT_TRUE(r.invariants_ok);
    EXPECT_TRUE(r.quiescent);
    EXPECT_TRUE(r.failed().empty());

    // oracle straight from the fixture: attach 1000, fee 10
    std::uint64_t attach = j["workload"][0]["value"], fee = j["contracts"]["compensation_fee"];
    std::uint64_t resv = j["side_chains"][0]["genesis"]["Bal_Resv"], bank = j["side_chains"][0]["genesis"]["Bal_Bank"];
    ASSERT_EQ(attach - fee, resv);
    const json& s = side0(r);
    EXPECT_EQ(s["registered"], true);
    EXPECT_EQ(s["sc_a_locked"], attach - fee);
    EXPECT_EQ(s["sc_register_balance"], 0);
    EXPECT_EQ(s["sc_register_suicided"], true);
    EXPECT_EQ(s["sc_bank_balance"], bank);
    EXPECT_EQ(s["circulating"], resv);
    EXPECT_EQ(r.summary["registry"], json::array({address_from_label("iot1").hex()}));
}

TEST(Simnet, SameSeedSameTrace)
{
    json j = fixture("drop_resend.json");
    RunResult a = run(j, {7, {}, {}, {}});
    RunResult b = run(j, {7, {}, {}, {}});
    EXPECT_EQ(a.trace.lines(), b.trace.lines());
    RunResult c = run(j, {8, {}, {}, {}});
    EXPECT_NE(a.trace.lines(), c.trace.lines());
}

TEST(Simnet, GenesisSupplyMismatchIsInvalid)
{
    json j = fixture("happy_path.json");
    j["side_chains"][0]["genesis"]["Bal_Bank"] = 999011;
    std::string msg = diag_text(j);
    EXPECT_NE(msg.find("Bal_Bank"), std::string::npos) << msg;
}

TEST(Simnet, MissingWitnessListIsInvalid)
{
    json j = fixture("happy_path.json");
    j["side_chains"][0]["genesis"].erase("Wit_Addr_List");
    std::string msg = diag_text(j);
    EXPECT_NE(msg.find("Wit_Addr_List"), std::string::npos) << msg;
}

TEST(Simnet, UnknownKeyIsInvalid)
{
    json j = fixture("happy_path.json");
    j["contracts"]["compensation_fees"] = 3;
    EXPECT_NE(diag_text(j).find("compensation_fees"), std::string::npos);
}

TEST(Simnet, UnsafeThresholdNeedsExplicitOverride)
{
    json j = fixture("happy_path.json");
    j["side_chains"][0]["threshold"] = 2;
    EXPECT_NE(diag_text(j), "");
    ParseOptions opts;
    opts.threshold_override = 2;
    EXPECT_NO_THROW(scenario_from_json(fixture("happy_path.json"), opts));
}

TEST(Simnet, ZeroDepthReorgChangesNothing)
{
    json j = fixture("happy_path.json");
    RunResult plain = run(j);
    j["fault_plan"] = {{"reorgs", json::array({{{"tick", 20}, {"chain", address_from_label("token").hex()}, {"depth", 0}}})}};
    RunResult zero = run(j);
    EXPECT_TRUE(zero.invariants_ok);
    json a = plain.summary, b = zero.summary;
    a["stats"].erase("reorgs");
    b["stats"].erase("reorgs");
    EXPECT_EQ(a, b);
}

TEST(Simnet, IdleSimulationPassesVacuously)
{
    json j = fixture("happy_path.json");
    j["workload"] = json::array();
    RunResult r = run(j);
    EXPECT_TRUE(r.invariants_ok);
    EXPECT_TRUE(r.quiescent);
    EXPECT_EQ(side0(r)["launched"], false);
    EXPECT_EQ(r.summary["registry"], json::array());
}

TEST(Simnet, RejectingMajorityRevertsRegistration)
{
    RunResult r = run(fixture("byzantine_majority.json"));
    EXPECT_TRUE(r.invariants_ok);
    EXPECT_TRUE(r.quiescent);
    EXPECT_EQ(side0(r)["registered"], false);
    EXPECT_EQ(side0(r)["reverted_registrations"], 1);
    EXPECT_EQ(side0(r)["sc_a_locked"], 0);
    EXPECT_EQ(r.summary["registry"], json::array());
}

TEST(Simnet, TransfersBothVariants)
{
    for (const char* name : {"transfers.json", "native_transfers.json"}) {
        RunResult r = run(fixture(name));
        EXPECT_TRUE(r.invariants_ok) << name;
        EXPECT_TRUE(r.quiescent) << name;
        EXPECT_EQ(side0(r)["registered"], true) << name;
    }
}

TEST(Simnet, EquivocationNeedsAnUnsafeQuorum)
{
    json j = fixture("equivocation.json");
    EXPECT_TRUE(run(j).invariants_ok);
    ParseOptions opts;
    opts.threshold_override = 2;
    RunResult r = run_scenario(scenario_from_json(j, opts), {{}, {}, {}, 2});
    EXPECT_TRUE(r.failed().contains("quorum_safety"));
}

TEST(Simnet, ReorgWithinOmegaIsHarmless)
{
    RunResult r = run(fixture("reorg_within_omega.json"));
    EXPECT_TRUE(r.invariants_ok);
    EXPECT_GE(r.stats.reorgs, 2u);
}

TEST(Simnet, ReorgBeyondOmegaIsDetected)
{
    RunResult r = run(fixture("reorg_beyond_omega.json"));
    EXPECT_FALSE(r.invariants_ok);
    EXPECT_TRUE(r.failed().contains("transfer_completeness") || r.failed().contains("peg_conservation"));
}

TEST(Simnet, DroppedMessagesAreResent)
{
    RunResult r = run(fixture("drop_resend.json"));
    EXPECT_TRUE(r.invariants_ok);
    EXPECT_GT(r.stats.drops, 0u);
    EXPECT_GE(r.stats.resends, 1u);
    EXPECT_GE(r.stats.subsequent_after_resend, 1u);
}

TEST(Simnet, StrictGateDiffersFromConservation)
{
    json j = fixture("mode_difference.json");
    EXPECT_TRUE(run(j).invariants_ok);
    RunResult strict = run(j, {{}, {}, GateMode::Strict, {}});
    EXPECT_FALSE(strict.invariants_ok);
}
