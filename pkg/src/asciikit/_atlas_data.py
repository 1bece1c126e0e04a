"""Frozen 8x16 monospace glyph bitmaps for code points 0x20-0x7E.

Generated by scripts/rebuild_glyph_atlas.py; do not edit by hand.
Each glyph is 16 bytes, one byte per pixel row, bit 7 = leftmost column.
"""

CELL_WIDTH = 8
CELL_HEIGHT = 16
FIRST_CODEPOINT = 32
LAST_CODEPOINT = 126

_PACKED = (
    "00000000000000000000000007#J8B7!Uv$7ytkO00000BqSsx00000000000000I5)^+VB>pH!N"
    "B{r;0000006btoI1B<pJOBUy00000V33ez7)}cd4gdfE00000JRl%2QOL$dIsgCw000005D*X$00"
    "00000000000OG7!VK;5D*X;2nYZG001Bm5C{ke2nYxe5Fh{m0000006;i6KmY&$000000000001y"
    "xmeh?540000000000000000000O7!VKu000000000006YKy0000000000000000000O7ytkO0000"
    "01_T5M2oMk;AYecM00000JY+^fT0%x-JOBUy00000I0y&`2nYxWJ^%m!00000I79{n3>YwAegFUf"
    "00000I79{nJOlzpJOBUy000003>*|BBt(7$1ONa400000d_X{W1O^5~H~;_u0000093VhkW<o+{J"
    "OBUy00000egp&z2nY}mFaQ7m00000JZ45@JZ3^>JOBUy00000JY+^jW<CZ4H~;_u00000000;m00"
    "00O7ytkO00000000;m0000O7!VKu000000006UU|<{q00000000000001f004df0000000000002"
    "NZ1_n4l0000000000JOl&`7!Uvu5C8xG000009AZL_l8};)Kp-3d000007#KJtBxHU<!T<mO0000"
    "0d`3b>d`3b>d;kCd0000093o&qKtNz38~^|S00000ctl1*LPADFcmMzZ00000eqdl=eqdl=egFUf"
    "00000eqdl=eqdl=U;qFB000009AH2|PC`OrJOBUy00000LPA19enLV*LI3~&00000ei#@S7#J8Be"
    "gFUf00000JOl&;1Ox<3cmMzZ00000LPSV#ct}J>LI3~&00000U|?WiU|?WiegFUf00000MrLM8T3"
    "SLvLI3~&00000Vq$VqQc6xnMgRZ+00000JY+&bLPA1hJOBUy00000d}d-|W_(~^U;qFB00000JY+"
    "&bLPA1hJOl&)00000d`3n@ctl1*LjV8(00000JYYazJO%<rJOBUy00000{}>n;7#J8B7ytkO0000"
    "0LPA19LPA1jJOBUy00000LPADlBqS&p7ytkO00000frG+YT3TjiWB>pF00000LL?*@7&s(G!T<mO"
    "00000LPjJw7#J8B7ytkO00000eg*^x7!V*}egFUf000~i5D*X$5D*X$5F7vi00000Kwuys5D*9m1"
    "Ox^E001}$2nYxW2nYxW2si)$000007(66G0000000000000000000000000000300000W5C8xG00"
    "0000000000000002Bh0zO7YJ^%m!002NhKtOzEVnSkOd;kCd00000000~yU|?V%8~^|S000IC1_n"
    "N6Mn*<vJ^%m!00000002B@LViGEJOBUy000gc5D<P45D*X$5C8xG00000002H_Mn*<vJ_H0f002N"
    "hKtOzCMn*<PMgRZ+000;O001}`7#J8BegFUf000O8001}$2nYxW2nZN(003ZMU|?o!czA4PVgLXD"
    "003|h5D*X$5D*X$4gdfE00000004GcQc_Y<QUCw|00000004YsMn*<PMgRZ+00000002B>LPA1hJ"
    "OBUy00000004YuVnSkOd_X`z00000002H_Mn*<vJ^}&)00000002HPFd!fxAOHXW00000001~-U_"
    "1mwJOBUy000005D<P45D*X$9smFU00000002ftMn*<vJ^%m!00000002TpBqS^t7ytkO00000004"
    "o4T3T9WBme*a00000002fL7#KJtLI3~&00000002TlBqTf-7!VL(00000004dj2pBLRegFUf000a"
    "a7#I+65EvL37z_Xa000mW5D*X$5D*X$5D*Xm003|h5D*v)7#I)`5O4qh0000000000a1H<f00000"
)
