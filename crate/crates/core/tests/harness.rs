use batchcover::harmonic::harmonic;
use batchcover::harness::{
    adversary_search, evaluate_sequence, is_nested_chain, render_svg, run_grid, write_csv,
    ExperimentGrid, PanelScale, STROKE_WIDTH,
};
use batchcover::solvers::Algorithm;

const EPS: f64 = 0.001;

fn grid(z: &[u32], m: std::ops::RangeInclusive<usize>, algorithms: &[Algorithm]) -> ExperimentGrid {
    ExperimentGrid {
        z_values: z.to_vec(),
        m_range: m,
        algorithms: algorithms.to_vec(),
        ..ExperimentGrid::default()
    }
}

/// `(points, dashed)` for every polyline in the document, in order.
fn polylines(svg: &str) -> Vec<(Vec<(f64, f64)>, bool)> {
    svg.lines()
        .filter(|l| l.contains("<polyline"))
        .map(|l| {
            let start = l.find("points=\"").unwrap() + 8;
            let end = start + l[start..].find('"').unwrap();
            let pts = l[start..end]
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            (pts, l.contains("stroke-dasharray"))
        })
        .collect()
}

#[test]
fn online_grid_tracks_harmonic() {
    let res = run_grid(&grid(&[0], 1..=10, &[Algorithm::Trivial]));
    assert_eq!(res.rows.len(), 10);
    assert!(res.skipped.is_empty() && res.failed.is_empty());
    for row in &res.rows {
        assert_eq!(row.lower_bound, harmonic(row.m));
        assert!(
            (row.ratio - harmonic(row.m)).abs() / harmonic(row.m) < 0.03,
            "m={}",
            row.m
        );
    }
}

#[test]
fn impossible_cells_are_skipped() {
    let res = run_grid(&grid(&[2], 1..=3, &Algorithm::ALL));
    assert!(res.rows.is_empty());
    assert_eq!(res.skipped.len(), 3);
    assert!(res.skipped[0].reason.contains("m >= 2^z"));
    assert!(render_svg(&res).is_err());
}

#[test]
fn dedicated_never_worse_at_z2() {
    let res = run_grid(&grid(&[2], 10..=10, &Algorithm::ALL));
    let t = res.row(2, 10, Algorithm::Trivial).unwrap();
    let d = res.row(2, 10, Algorithm::Dedicated).unwrap();
    assert!(d.alg_cost <= t.alg_cost + 1e-9);
}

#[test]
fn ratio_non_decreasing_in_m() {
    let res = run_grid(&grid(&[0, 1, 2, 3], 1..=20, &Algorithm::ALL));
    for z in [0, 1, 2, 3] {
        for alg in Algorithm::ALL {
            let rows: Vec<_> = res.rows_for(z, alg).collect();
            for w in rows.windows(2) {
                assert!(w[1].ratio >= w[0].ratio - 1e-9, "z={z} {alg} m={}", w[1].m);
            }
        }
    }
}

#[test]
fn algorithms_agree_on_online_and_pairs() {
    let res = run_grid(&grid(&[0, 1], 1..=16, &Algorithm::ALL));
    for m in 1..=16 {
        let t = res.row(0, m, Algorithm::Trivial).unwrap();
        let d = res.row(0, m, Algorithm::Dedicated).unwrap();
        assert_eq!(t.alg_cost.to_bits(), d.alg_cost.to_bits(), "z=0 m={m}");
    }
    // two copies of a pair raise simultaneously, so one eps step may overshoot per batch
    for m in 2..=16 {
        let t = res.row(1, m, Algorithm::Trivial).unwrap();
        let d = res.row(1, m, Algorithm::Dedicated).unwrap();
        let slack = EPS * (1.0 + m as f64).ln() * (m as f64 - 1.0);
        assert!(d.alg_cost <= t.alg_cost + slack + 1e-9, "z=1 m={m}");
    }
}

#[test]
fn adversary_search_examples() {
    let one = adversary_search(1, Algorithm::Trivial, EPS, 1).unwrap();
    assert!((one.best_ratio - 1.0).abs() < 0.01);

    let disjoint = evaluate_sequence(2, &[vec![0], vec![1]], Algorithm::Trivial, EPS).unwrap();
    assert!((disjoint - 1.0).abs() < 0.01);

    let three = adversary_search(3, Algorithm::Trivial, EPS, 3).unwrap();
    assert_eq!(three.evaluated, 7 + 49 + 343);
    assert!(is_nested_chain(&three.best_sequence, 3));
    let canonical = evaluate_sequence(
        3,
        &[vec![0, 1, 2], vec![1, 2], vec![2]],
        Algorithm::Trivial,
        EPS,
    )
    .unwrap();
    assert!(three.best_ratio <= canonical * 1.03);
    assert!((three.best_ratio - harmonic(3)).abs() / harmonic(3) < 0.03);
}

#[test]
fn search_best_bounded_by_canonical() {
    for m in 1..=3 {
        for alg in Algorithm::ALL {
            let out = adversary_search(m, alg, EPS, m).unwrap();
            let chain: Vec<Vec<usize>> = (0..m).map(|i| (i..m).collect()).collect();
            let canonical = evaluate_sequence(m, &chain, alg, EPS).unwrap();
            assert!(out.best_ratio <= canonical * 1.03 + 1e-9, "m={m} {alg}");
            assert!(out.best_ratio >= canonical - 1e-9, "m={m} {alg}");
        }
    }
}

#[test]
fn svg_online_ratio_overlays_bound() {
    let res = run_grid(&grid(&[0], 1..=30, &[Algorithm::Trivial]));
    let svg = render_svg(&res).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 2);
    let (solid, dashed) = (&lines[0], &lines[1]);
    assert!(!solid.1 && dashed.1);
    for (a, b) in solid.0.iter().zip(&dashed.0) {
        assert_eq!(a.0, b.0);
        assert!((a.1 - b.1).abs() <= STROKE_WIDTH, "{a:?} {b:?}");
    }
    // the rendered points agree with the scale
    let scale = PanelScale::for_result(&res);
    let first = &res.rows[0];
    assert!((solid.0[0].0 - scale.x(first.m as f64)).abs() < 0.01);
    assert!((solid.0[0].1 - scale.y(first.ratio)).abs() < 0.01);
}

#[test]
fn svg_batched_ratio_above_bound() {
    let res = run_grid(&grid(&[4], 16..=30, &[Algorithm::Dedicated]));
    let svg = render_svg(&res).unwrap();
    let lines = polylines(&svg);
    let (solid, dashed) = (&lines[0], &lines[1]);
    for (i, (a, b)) in solid.0.iter().zip(&dashed.0).enumerate() {
        if res.rows[i].m > 16 {
            // smaller pixel y is higher on the page
            assert!(a.1 < b.1, "m={}", res.rows[i].m);
        }
    }
    assert!(svg.contains("competitive ratio"));
    assert_eq!(svg, render_svg(&res).unwrap());
}

#[test]
fn csv_has_one_line_per_cell() {
    let res = run_grid(&grid(&[0, 2, 4], 1..=30, &Algorithm::ALL));
    let mut buf = Vec::new();
    write_csv(&res, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "z,m,algorithm,epsilon,alg_cost,opt_cost,ratio,lower_bound"
    );
    let expected = 2 * (30 + 27 + 15);
    assert_eq!(lines.count(), expected);

    let again = run_grid(&grid(&[0, 2, 4], 1..=30, &Algorithm::ALL));
    let mut buf2 = Vec::new();
    write_csv(&again, &mut buf2).unwrap();
    assert_eq!(text.as_bytes(), &buf2[..]);
}
