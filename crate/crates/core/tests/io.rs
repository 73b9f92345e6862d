use std::fs;

use tempfile::TempDir;
use tgirg::assortativity::coefficient_report;
use tgirg::generators::{generate, Model, ModelParams};
use tgirg::io::{read_edge_list, write_edge_list, EdgeListFile};

#[test]
fn generated_graph_survives_a_file_round_trip() {
    let p = ModelParams::new(Model::Tgirg, 2000).tau(2.5).sigma(0.3).seed(8);
    let g = generate(&p, 1.0, 0).unwrap().graph;
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.txt");
    write_edge_list(&g, &path).unwrap();
    let (h, rep) = read_edge_list(&EdgeListFile::new(&path)).unwrap();
    assert_eq!(rep.self_loops + rep.duplicates, 0);
    assert_eq!(h.edge_count(), g.edge_count());
    // isolated vertices are dropped, so compare on the surviving labels
    let labelled = |g: &tgirg::Graph| {
        let mut e: Vec<(u64, u64)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (g.label(u), g.label(v));
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        e
    };
    assert_eq!(labelled(&g), labelled(&h));
    let (x, y) = (coefficient_report(&g).unwrap(), coefficient_report(&h).unwrap());
    assert_eq!(x.kendall, y.kendall);
    assert_eq!((x.concordant, x.discordant), (y.concordant, y.discordant));
}

#[test]
fn konect_quirks_are_tolerated() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("konect.txt");
    fs::write(
        &path,
        "% asym unweighted\n% 6 4 4\n1 2 1 946684800\n2 1 1 946684801\n\n3\t4\n4 4\n# trailing comment\n2 3\n",
    )
    .unwrap();
    let (g, rep) = read_edge_list(&EdgeListFile::new(&path)).unwrap();
    assert_eq!((rep.edge_lines, rep.duplicates, rep.self_loops), (5, 1, 1));
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 3));

    let zero = dir.path().join("zero.txt");
    fs::write(&zero, "0 1\n1 2\n").unwrap();
    assert!(read_edge_list(&EdgeListFile::new(&zero)).is_err());
    let (g0, _) = read_edge_list(&EdgeListFile::new(&zero).one_indexed(false)).unwrap();
    assert_eq!(g0.edge_count(), 2);
}
