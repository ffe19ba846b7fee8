//! Figure tables against coordinates transcribed from the published plots.

use xorprot::power::PowerParams;
use xorprot::repro::{figure, Figure, Table};

struct Golden {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn golden(name: &str) -> Golden {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.trim().parse().unwrap()).collect())
        .collect();
    Golden { header, rows }
}

/// Compares `columns` of `ours` with the golden file, row by row, at `tol`.
fn compare(ours: &Table, gold: &Golden, columns: &[&str], tol: f64) {
    assert_eq!(ours.rows.len(), gold.rows.len());
    for name in columns {
        let o = ours.column(name).unwrap();
        let g = gold.header.iter().position(|h| h == name).unwrap();
        for (row, grow) in ours.rows.iter().zip(&gold.rows) {
            let ours = row[o].as_num().unwrap();
            let plotted = grow[g];
            assert!(
                (ours - plotted).abs() <= tol,
                "{name} at {}: {ours} vs {plotted}",
                grow[0]
            );
        }
    }
}

fn table(fig: &str) -> Table {
    figure(fig.parse::<Figure>().unwrap(), 8, &PowerParams::default()).unwrap()
}

#[test]
fn fig3_power_columns() {
    let ours = table("fig3");
    compare(
        &ours,
        &golden("fig3_plot.csv"),
        &["volume", "conventional", "nc_analytical", "nc_oracle"],
        0.5,
    );
    // The plotted heuristic curve sits 10% above the optimum; ours reaches it.
    let osh = ours.column("osh").unwrap();
    let oracle = ours.column("nc_oracle").unwrap();
    for row in &ours.rows {
        assert_eq!(row[osh].as_num(), row[oracle].as_num());
    }
}

#[test]
fn fig5_power_columns() {
    compare(
        &table("fig5"),
        &golden("fig5_plot.csv"),
        &["volume", "conventional", "nc_analytical", "nc_oracle", "osh"],
        0.5,
    );
}

#[test]
fn fig4_savings_columns() {
    compare(&table("fig4"), &golden("fig4_plot.csv"), &["n", "osh", "ww", "pp"], 5e-5);
}

#[test]
fn fig6_savings_columns() {
    // The mixed-kind curves are not reproduced; see the README.
    compare(&table("fig6"), &golden("fig6_plot.csv"), &["n", "osh", "ww", "pp"], 5e-5);
}

#[test]
fn csv_is_stable() {
    let csv = table("fig4").to_csv();
    assert!(csv.starts_with("n,class,analytic,osh,ww,pp\n3,odd,16.6667,16.6667,0,0\n"));
    assert!(csv.contains("\n12,even,15.1515,15.1515,0,15.1515\n"));
    assert_eq!(csv, table("fig4").to_csv());
    let fig6 = table("fig6").to_csv();
    assert!(fig6.contains("\n9,odd-2,33.3333,33.3333,11.1111,15.4321,15.4321,33.3333\n"));
}
