use std::collections::BTreeSet;

use sixv_cli::campaign::{draw_samples, meta_of};
use sixv_cli::config::{CampaignConfig, Output};
use sixv_cli::raw::{read_raw, write_raw};
use sixv_cli::render::{render_svg, trace_paths};
use sixv_cli::stats::{edge_csv, edge_stats, height_csv, height_variance, holes_csv, parse_csv, EDGE_HEADER, HEIGHT_HEADER, HOLES_HEADER};
use sixv_cli::verify::{run_suite, verify_csv, Suite, VERIFY_HEADER};
use sixv_cli::CliError;

fn small(n: usize, m: usize, samples: u64) -> CampaignConfig {
    let mut c = CampaignConfig::default();
    c.n = n;
    c.m = m;
    c.n_samples = samples;
    c.seed = 11;
    c
}

#[test]
fn config_parses_keys_comments_and_overrides() {
    let text = "# campaign\nq=0.4\nu = 1.8\nv=0.3 # trailing\nN=7\nM=5\nn_samples=12\nseed=99\noutputs=raw,holes,edge-cdf\nholes_k=2\n";
    let mut c = CampaignConfig::parse(text).unwrap();
    assert_eq!((c.q, c.u, c.v, c.n, c.m, c.n_samples, c.seed), (0.4, 1.8, 0.3, 7, 5, 12, 99));
    assert_eq!(c.outputs, BTreeSet::from([Output::Raw, Output::Holes, Output::EdgeCdf]));
    assert_eq!(c.holes_k, 2);
    c.set_pair("threads=3").unwrap();
    assert_eq!(c.threads, Some(3));
    c.validate().unwrap();
    c.params().unwrap();
}

#[test]
fn config_rejects_bad_input() {
    assert!(matches!(CampaignConfig::parse("q"), Err(CliError::Config(_))));
    assert!(matches!(CampaignConfig::parse("colour=red"), Err(CliError::Config(_))));
    assert!(matches!(CampaignConfig::parse("outputs=height_variance"), Err(CliError::Config(_))));
    assert!(matches!(CampaignConfig::parse("N=x"), Err(CliError::Config(_))));
    let bad_q = CampaignConfig::parse("q=1.5").unwrap();
    assert!(bad_q.params().is_err());
    let zero = CampaignConfig::parse("n_samples=0").unwrap();
    assert!(zero.validate().is_err());
}

#[test]
fn output_names_round_trip() {
    for o in [Output::Raw, Output::Holes, Output::HeightVariance, Output::EdgeCdf] {
        assert_eq!(o.to_string().parse::<Output>().unwrap(), o);
    }
}

#[test]
fn raw_round_trip() {
    let c = small(6, 4, 5);
    let samples = draw_samples(&c).unwrap();
    let text = write_raw(&meta_of(&c), &samples);
    let back = read_raw(&text).unwrap();
    assert_eq!(back.meta, meta_of(&c));
    assert_eq!(back.samples, samples);
    assert_eq!(write_raw(&back.meta, &back.samples), text);
}

#[test]
fn raw_rejects_garbage() {
    assert!(read_raw("hello\n").is_err());
    assert!(read_raw("# sixv-raw v1\nq=0.5 u=1.5\n").is_err());
    assert!(read_raw("# sixv-raw v1\nq=0.5 u=1.5 v=0.6 N=2 M=1 seed=1\nbanana\n").is_err());
}

#[test]
fn sampling_is_deterministic_across_thread_counts() {
    let mut c = small(8, 6, 16);
    c.threads = Some(1);
    let one = write_raw(&meta_of(&c), &draw_samples(&c).unwrap());
    c.threads = Some(4);
    let four = write_raw(&meta_of(&c), &draw_samples(&c).unwrap());
    assert_eq!(one, four);
    c.seed += 1;
    let other = write_raw(&meta_of(&c), &draw_samples(&c).unwrap());
    assert_ne!(one, other);
}

#[test]
fn samples_are_indexed_in_order() {
    let c = small(4, 2, 9);
    let idx: Vec<u64> = draw_samples(&c).unwrap().iter().map(|(i, _)| *i).collect();
    assert_eq!(idx, (0..9).collect::<Vec<_>>());
}

#[test]
fn holes_csv_interlaces() {
    let c = small(10, 8, 20);
    let samples = draw_samples(&c).unwrap();
    let text = holes_csv(&samples, 3).unwrap();
    let (_, rows) = parse_csv(&text, HOLES_HEADER).unwrap();
    let mut by_sample: std::collections::HashMap<(u64, usize, usize), f64> = Default::default();
    for r in &rows {
        let y: f64 = if r[3] == "inf" { f64::INFINITY } else { r[3].parse().unwrap() };
        by_sample.insert((r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()), y);
    }
    for s in 0..20u64 {
        for j in 1..3usize {
            for i in 1..=j {
                let (below, above) = (by_sample[&(s, j + 1, i)], by_sample[&(s, j + 1, i + 1)]);
                let mid = by_sample[&(s, j, i)];
                if mid.is_finite() {
                    assert!((below.is_infinite() || below <= mid) && mid <= above, "sample {s} j {j} i {i}");
                }
            }
        }
    }
}

#[test]
fn height_grid_has_n_by_w_cells() {
    let c = small(5, 3, 7);
    let samples = draw_samples(&c).unwrap();
    let w = samples.iter().map(|(_, s)| s.width()).max().unwrap();
    let cells = height_variance(&samples).unwrap();
    assert_eq!(cells.len(), 5 * w as usize);
    for &(x, y, mean, var) in &cells {
        assert!((1..=w).contains(&x) && (1..=5).contains(&y));
        assert!((0.0..=y as f64).contains(&mean) && var >= 0.0);
    }
    let (_, rows) = parse_csv(&height_csv(&cells), HEIGHT_HEADER).unwrap();
    assert_eq!(rows.len(), cells.len());
    for (r, &(x, y, mean, var)) in rows.iter().zip(&cells) {
        assert_eq!(r[0].parse::<i64>().unwrap(), x);
        assert_eq!(r[1].parse::<usize>().unwrap(), y);
        assert_eq!(r[2].parse::<f64>().unwrap(), mean);
        assert_eq!(r[3].parse::<f64>().unwrap(), var);
    }
}

#[test]
fn edge_csv_round_trip() {
    let c = small(6, 6, 30);
    let samples = draw_samples(&c).unwrap();
    let e = edge_stats(&meta_of(&c), &samples).unwrap();
    assert!(e.ks >= 0.0 && e.ks <= 1.0);
    let (comments, rows) = parse_csv(&edge_csv(&e), EDGE_HEADER).unwrap();
    assert!(comments.iter().any(|l| l.contains("ks=")));
    assert_eq!(rows.len(), 30);
    for (r, (idx, _, z)) in rows.iter().zip(&e.rows) {
        assert_eq!(r[0].parse::<u64>().unwrap(), *idx);
        assert_eq!(r[2].parse::<f64>().unwrap(), *z);
    }
}

#[test]
fn parse_csv_checks_header_and_width() {
    assert!(parse_csv("# other\na,b\n1,2\n", EDGE_HEADER).is_err());
    let ragged = format!("{EDGE_HEADER}\na,b\n1,2,3\n");
    assert!(parse_csv(&ragged, EDGE_HEADER).is_err());
}

#[test]
fn verify_suites_pass() {
    for name in ["identities", "operators", "sampler-exact", "asymptotics"] {
        let suite: Suite = name.parse().unwrap();
        let checks = run_suite(suite).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.pass, "{name}: {} lhs {} rhs {} diff {} bound {}", c.name, c.lhs, c.rhs, c.diff, c.bound);
        }
        let (comments, rows) = parse_csv(&verify_csv(name, &checks), VERIFY_HEADER).unwrap();
        assert_eq!(comments, vec![format!("suite={name}")]);
        assert_eq!(rows.len(), checks.len());
    }
}

#[test]
fn empty_or_unknown_suite_is_a_usage_error() {
    assert!(matches!("".parse::<Suite>(), Err(CliError::Usage(_))));
    assert!(matches!("everything".parse::<Suite>(), Err(CliError::Usage(_))));
}

#[test]
fn render_draws_one_polyline_per_path() {
    let c = small(6, 4, 3);
    let samples = draw_samples(&c).unwrap();
    for (_, w) in &samples {
        let paths = trace_paths(w);
        assert_eq!(paths.len(), 6);
        for p in &paths {
            assert!(p.windows(2).all(|s| s[1].0 >= s[0].0 && s[1].1 >= s[0].1));
        }
        let svg = render_svg(w, Some(3)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert_eq!(svg, render_svg(w, Some(3)).unwrap());
    }
}
