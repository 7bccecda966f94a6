use std::fmt::Write;

use super::{OrbitPoset, RankReport};

/// Graphviz rendering: one node per class, inclusion edges between classes.
pub fn poset_to_dot(p: &OrbitPoset) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph orbit_poset {{");
    let _ = writeln!(s, "  label=\"{} ell={}\";", p.group, p.ell);
    let _ = writeln!(s, "  rankdir=BT;");
    for c in &p.classes {
        let shape = if c.maximal { "box" } else { "ellipse" };
        let style = if c.complete { "solid" } else { "dashed" };
        let _ = writeln!(
            s,
            "  c{} [label=\"c{}\\nrank {}\\nsize {}{}\", shape={shape}, style={style}];",
            c.id,
            c.id,
            c.rank,
            c.size,
            if c.maximal { "\\nmaximal" } else { "" }
        );
    }
    for [a, b] in &p.edges {
        let _ = writeln!(s, "  c{a} -> c{b};");
    }
    let _ = writeln!(s, "}}");
    s
}

/// Plain-text summary of a report and its poset.
pub fn poset_to_text(r: &RankReport, p: &OrbitPoset) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group {}  |G| = {}  ell = {}", r.group, r.order, r.ell);
    let _ = writeln!(s, "Sylow order {} via {}; ell-rank {}", r.sylow_order, r.sylow_provider, r.ell_rank);
    let _ = writeln!(s, "catalog {} subgroups in {} classes", r.catalog_size, p.classes.len());
    for c in &p.classes {
        let orbit = c.orbit_size.map_or("incomplete".to_string(), |o| o.to_string());
        let _ = writeln!(
            s,
            "  c{:<3} rank {} size {:<6} {} orbit {}",
            c.id,
            c.rank,
            c.size,
            if c.maximal { "maximal" } else { "       " },
            orbit
        );
    }
    let _ = writeln!(s, "components {}", r.components);
    match r.tf_rank {
        Some(t) => {
            let _ = writeln!(s, "tf_rank {t} ({})", r.rule);
        }
        None => {
            let _ = writeln!(s, "tf_rank unknown ({})", r.rule);
        }
    }
    for c in &r.caveats {
        let _ = writeln!(s, "caveat: {c}");
    }
    s
}
