import numpy as np


def slope_regions(v_h_grid, out_fn, v_t_grid, v_r, tol=1e-9):
    """Label each ``v_h`` by how the output moves with ``v_t``.

    ``out_fn(v_h, v_t)`` is evaluated along ``v_t_grid`` and a line is fitted
    per ``v_h``.  Labels: ``off`` (flat at 0), ``rising``, ``falling``,
    ``flat`` (flat elsewhere).  Returns the run-length encoded labels as
    ``[(label, first_v_h, level_at_first_v_h), ...]``.
    """
    H, T = np.meshgrid(v_h_grid, v_t_grid, indexing="ij")
    out = np.asarray(out_fn(H, T))
    slope = np.polyfit(v_t_grid, out.T, 1)[0]
    mean = out.mean(axis=1)
    labels = np.where(
        slope > tol,
        "rising",
        np.where(slope < -tol, "falling", np.where(np.abs(mean) < tol, "off", "flat")),
    )
    runs = []
    for h, lab, m in zip(v_h_grid, labels, mean):
        if not runs or runs[-1][0] != lab:
            runs.append((str(lab), float(h), float(m)))
    return runs


# criterion number -> (passed, description); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {text}")
