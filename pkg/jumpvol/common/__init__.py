from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

# シードの上限 (64ビット符号なし整数)
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class RngStream:
    """乱数ストリーム

    (seed, stream_id, parents)が等しいストリームは、プラットフォームや並列度に
    関係なく同じ乱数列を生成する。カウンター型のPhilox生成器を、SeedSequenceの
    spawn_keyで分岐させて構築する。
    """

    # シード
    seed: int
    # サブストリーム番号
    stream_id: int = 0
    # 親ストリームのサブストリーム番号
    parents: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        """属性を検証する。

        Raises:
            ValueError: シードが64ビット符号なし整数の範囲外です。
            ValueError: サブストリーム番号が負です。
        """
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("シードが64ビット符号なし整数の範囲外です。")
        if self.stream_id < 0 or any(p < 0 for p in self.parents):
            raise ValueError("サブストリーム番号が負です。")

    @property
    def spawn_key(self) -> Tuple[int, ...]:
        """SeedSequenceに渡すspawn_keyを返す。

        Returns:
            Tuple[int, ...]: spawn_key
        """
        return self.parents + (self.stream_id,)

    def substream(self, index: int) -> "RngStream":
        """このストリームから分岐したサブストリームを返す。

        Args:
            index (int): サブストリーム番号

        Returns:
            RngStream: サブストリーム
        """
        return RngStream(self.seed, index, self.spawn_key)

    def generator(self) -> np.random.Generator:
        """このストリームの乱数生成器を新しく構築する。

        Returns:
            np.random.Generator: 乱数生成器
        """
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        return np.random.Generator(np.random.Philox(seq))
