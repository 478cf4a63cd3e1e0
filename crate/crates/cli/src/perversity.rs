//! Perversity flag syntax: a preset name (`middle`, `zero`, `top`) or the
//! explicit form `p(1)=0,p(2)=1,...`.

use twistoric::icengine::Perversity;

pub fn parse_explicit_perversity(text: &str) -> Result<Perversity, String> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(Perversity::from_values([]));
    }
    let mut pairs = Vec::new();
    for part in t.split(',') {
        let part = part.trim();
        let inner = part
            .strip_prefix("p(")
            .ok_or_else(|| format!("expected `p(c)=v`, got `{part}`"))?;
        let (codim_str, rest) = inner
            .split_once(')')
            .ok_or_else(|| format!("missing `)` in `{part}`"))?;
        let value_str = rest
            .trim_start()
            .strip_prefix('=')
            .ok_or_else(|| format!("missing `=` in `{part}`"))?;
        let codim: u32 = codim_str
            .trim()
            .parse()
            .map_err(|_| format!("bad codimension in `{part}`"))?;
        if codim == 0 {
            return Err("perversity codimensions start at 1".to_string());
        }
        let value: i64 = value_str
            .trim()
            .parse()
            .map_err(|_| format!("bad value in `{part}`"))?;
        pairs.push((codim, value));
    }
    Ok(Perversity::from_values(pairs))
}

/// Preset name or explicit pairs; presets need the maximal codimension.
pub fn parse_perversity(text: &str, max_codim: u32) -> Result<Perversity, String> {
    if let Some(p) = Perversity::preset(text.trim(), max_codim) {
        return Ok(p);
    }
    parse_explicit_perversity(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets() {
        assert_eq!(
            parse_perversity("middle", 2).unwrap(),
            Perversity::middle(2)
        );
        assert_eq!(parse_perversity("zero", 3).unwrap(), Perversity::zero(3));
        assert_eq!(parse_perversity("top", 3).unwrap(), Perversity::top(3));
    }

    #[test]
    fn explicit_pairs() {
        let p = parse_perversity("p(1)=0,p(2)=-1", 2).unwrap();
        assert_eq!(p.value(1), Some(0));
        assert_eq!(p.value(2), Some(-1));
        assert!(parse_perversity("p(0)=1", 2).is_err());
        assert!(parse_perversity("q(1)=0", 2).is_err());
    }

    #[test]
    fn display_round_trip() {
        let p = Perversity::middle(4);
        assert_eq!(parse_explicit_perversity(&p.to_string()).unwrap(), p);
    }
}
