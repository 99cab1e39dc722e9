//! Browser bindings. Inputs are the repository's text formats; outputs are
//! JSON strings for the page script.

use serde_json::json;
use wasm_bindgen::prelude::*;

use pvg_core::hamilton::hamiltonian_cycle as ham_cycle;
use pvg_core::io::{parse_graph, parse_points};
use pvg_core::planar::{classify, reconstruct};
use pvg_core::{build_pvg, Embedding};

fn embedding_json(e: &Embedding) -> serde_json::Value {
    let blockers: Vec<_> = e
        .blockers
        .iter()
        .map(|((a, b), bs)| json!({ "pair": [a, b], "blockers": bs }))
        .collect();
    json!({
        "points": e.points.points().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "edges": e.graph.edges().collect::<Vec<_>>(),
        "blocked": blockers,
    })
}

/// Visibility graph of a point list.
pub fn visibility_json(points: &str) -> Result<String, String> {
    let ps = parse_points(points).map_err(|e| e.to_string())?;
    Ok(embedding_json(&build_pvg(&ps)).to_string())
}

/// Hamiltonian cycle through the points, as vertex indices.
pub fn cycle_json(points: &str) -> Result<String, String> {
    let ps = parse_points(points).map_err(|e| e.to_string())?;
    let c = ham_cycle(&build_pvg(&ps)).map_err(|e| e.to_string())?;
    Ok(json!(c).to_string())
}

/// Planar class of a graph and, when positive, points realizing it.
pub fn classify_json(graph: &str) -> Result<String, String> {
    let g = parse_graph(graph).map_err(|e| e.to_string())?;
    let c = classify(&g);
    let e = reconstruct(&c);
    Ok(json!({
        "summary": c.summary(),
        "planar": c.is_planar_pvg(),
        "embedding": e.as_ref().map(embedding_json),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn visibility_graph(points: &str) -> Result<String, JsValue> {
    visibility_json(points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn hamiltonian_cycle(points: &str) -> Result<String, JsValue> {
    cycle_json(points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify_graph(graph: &str) -> Result<String, JsValue> {
    classify_json(graph).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn operations() {
        let v: Value = serde_json::from_str(&visibility_json("0 0\n1 0\n2 0\n0 1\n").unwrap()).unwrap();
        assert_eq!(v["edges"].as_array().unwrap().len(), 5);
        assert_eq!(v["blocked"][0]["pair"], json!([0, 2]));
        assert_eq!(v["blocked"][0]["blockers"], json!([1]));

        let c: Vec<usize> = serde_json::from_str(&cycle_json("0 0\n2 0\n0 2\n2 2\n1 1\n").unwrap()).unwrap();
        assert_eq!(c.len(), 5);
        assert!(cycle_json("0 0\n1 1\n").is_err());

        let k: Value = serde_json::from_str(&classify_json("4 3\n0 1\n1 2\n2 3\n").unwrap()).unwrap();
        assert_eq!(k["summary"], "FamilyA(n=4)");
        assert_eq!(k["embedding"]["edges"].as_array().unwrap().len(), 3);
        let k5: Value =
            serde_json::from_str(&classify_json("5 10\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap())
                .unwrap();
        assert_eq!(k5["planar"], false);
        assert!(visibility_json("0 0\n0 x\n").unwrap_err().contains("line 2"));
    }
}
