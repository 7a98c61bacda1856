#!/usr/bin/env python3
"""
Smoke test for the chain_simulation package layout.
"""


def test_imports():
    """All components can be imported from the package and its subpackages."""
    from chain_simulation import __version__
    from chain_simulation.config import PolicyName, SimulationConfig
    from chain_simulation.harness import ExperimentWorkflow, run_experiment, verify_lemmas
    from chain_simulation.metrics import compute_summary, fit_scaling
    from chain_simulation.model import EdgeOracle, SimState
    from chain_simulation.pathfind import dfs_longest_observed, fair_path_extension
    from chain_simulation.policies import build_policy
    from chain_simulation.randwalk import WalkParams, steady_state

    assert __version__


def test_configuration():
    """Configuration helpers return the documented defaults."""
    from chain_simulation.config import PolicyName, SimulationConfig

    defaults = SimulationConfig.get_defaults()
    assert defaults["default_c"]["batch"] == 12.0
    assert SimulationConfig.default_horizon(0.1) == 100_000
    assert SimulationConfig.default_c(PolicyName.NASP) == 120.0
    assert SimulationConfig.greedy_donor_count(0.1) == 24


def test_workflow_initialization():
    """The experiment workflow compiles."""
    from chain_simulation.harness import ExperimentWorkflow

    workflow = ExperimentWorkflow()
    assert workflow.workflow is not None


def main():
    """Run all checks."""
    print("🧪 Testing chain_simulation structure...\n")

    tests = [
        ("Import Test", test_imports),
        ("Configuration Test", test_configuration),
        ("Workflow Test", test_workflow_initialization),
    ]

    passed = 0
    total = len(tests)

    for test_name, test_func in tests:
        print(f"Running {test_name}...")
        try:
            test_func()
            print(f"✅ {test_name} passed")
            passed += 1
        except Exception as e:
            print(f"❌ {test_name} failed: {e}")
        print()

    print(f"📊 Test Results: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All tests passed! Package structure is working correctly.")
    else:
        print("⚠️  Some tests failed. Please check the errors above.")


if __name__ == "__main__":
    main()
