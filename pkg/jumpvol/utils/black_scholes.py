import math

from scipy.optimize import bisect
from scipy.stats import norm

from jumpvol.common.errors import NoSolutionError
from jumpvol.domain.models.options import OptionKind

# 年率換算に用いる1年の日数 (暗号資産は休まず取引される)
DAYS_PER_YEAR = 365.0

# インプライド・ボラティリティを探索する範囲
IV_LOWER = 1e-6
IV_UPPER = 10.0

# インプライド・ボラティリティの許容誤差
IV_TOLERANCE = 1e-8


def intrinsic_value(
    spot: float,
    strike: float,
    rate: float,
    tau_days: float,
    kind: OptionKind = OptionKind.Call,
) -> float:
    """割り引いた権利行使価格で測った本源的価値を返す。

    ボラティリティを0に近づけたときの価格で、無裁定価格帯の下限になる。

    Args:
        spot (float): 原資産価格
        strike (float): 権利行使価格
        rate (float): 1日当たりの連続複利の無リスク金利
        tau_days (float): 満期までの日数
        kind (OptionKind): オプションの種類

    Returns:
        float: 本源的価値
    """
    forward_strike = strike * math.exp(-rate * tau_days)
    if kind == OptionKind.Call:
        return max(spot - forward_strike, 0.0)
    return max(forward_strike - spot, 0.0)


def upper_bound(
    spot: float,
    strike: float,
    rate: float,
    tau_days: float,
    kind: OptionKind = OptionKind.Call,
) -> float:
    """無裁定価格帯の上限を返す。

    Returns:
        float: コールは原資産価格、プットは割り引いた権利行使価格
    """
    if kind == OptionKind.Call:
        return spot
    return strike * math.exp(-rate * tau_days)


def bs_price(
    spot: float,
    strike: float,
    rate: float,
    sigma_annual: float,
    tau_days: float,
    kind: OptionKind = OptionKind.Call,
) -> float:
    """Black-Scholesモデルでヨーロピアン・オプションの価格を計算する。

    総分散は sigma_annual^2 * tau_days / 365 とする。金利は1日当たりで与える。

    Args:
        spot (float): 原資産価格
        strike (float): 権利行使価格
        rate (float): 1日当たりの連続複利の無リスク金利
        sigma_annual (float): 年率換算したボラティリティ
        tau_days (float): 満期までの日数
        kind (OptionKind): オプションの種類

    Raises:
        ValueError: 原資産価格が正ではありません。
        ValueError: ボラティリティまたは満期が負です。

    Returns:
        float: オプション価格
    """
    if not spot > 0:
        raise ValueError("原資産価格が正ではありません。")
    if sigma_annual < 0 or tau_days < 0 or strike < 0:
        raise ValueError("ボラティリティまたは満期が負です。")
    total_sd = sigma_annual * math.sqrt(tau_days / DAYS_PER_YEAR)
    if total_sd == 0.0 or strike == 0.0:
        return intrinsic_value(spot, strike, rate, tau_days, kind)
    discount = math.exp(-rate * tau_days)
    d1 = (math.log(spot / (strike * discount)) + 0.5 * total_sd**2) / total_sd
    d2 = d1 - total_sd
    if kind == OptionKind.Call:
        return float(spot * norm.cdf(d1) - strike * discount * norm.cdf(d2))
    return float(strike * discount * norm.cdf(-d2) - spot * norm.cdf(-d1))


def bs_implied_vol(
    price: float,
    spot: float,
    strike: float,
    rate: float,
    tau_days: float,
    kind: OptionKind = OptionKind.Call,
) -> float:
    """価格を再現するBlack-Scholesのボラティリティ (年率) を二分法で求める。

    Args:
        price (float): オプション価格
        spot (float): 原資産価格
        strike (float): 権利行使価格
        rate (float): 1日当たりの連続複利の無リスク金利
        tau_days (float): 満期までの日数
        kind (OptionKind): オプションの種類

    Raises:
        NoSolutionError: 価格が本源的価値以下です。
        NoSolutionError: 価格が無裁定価格帯の上限以上です。

    Returns:
        float: インプライド・ボラティリティ
    """
    lower = intrinsic_value(spot, strike, rate, tau_days, kind)
    upper = upper_bound(spot, strike, rate, tau_days, kind)
    if not price > lower:
        raise NoSolutionError(f"価格が本源的価値以下です (price={price:.6g})。", lower)
    if not price < upper:
        raise NoSolutionError(
            f"価格が無裁定価格帯の上限以上です (price={price:.6g})。", upper
        )

    def gap(sigma: float) -> float:
        return bs_price(spot, strike, rate, sigma, tau_days, kind) - price

    # 探索範囲の端で価格を挟めない場合は、近い方の境界に違反したとみなす
    if gap(IV_LOWER) > 0:
        raise NoSolutionError("価格が探索範囲の下端の価格を下回ります。", lower)
    if gap(IV_UPPER) < 0:
        raise NoSolutionError("価格が探索範囲の上端の価格を上回ります。", upper)
    return float(bisect(gap, IV_LOWER, IV_UPPER, xtol=IV_TOLERANCE))
