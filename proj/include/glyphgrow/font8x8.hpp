#pragma once

// Bundled 8x8 bitmap font, original artwork, released to the public domain.
// One byte per row, top row first; column c (0 = leftmost) is bit (7 - c).
// Coverage: U+0020..U+007E and U+00A0..U+00FF.

namespace glyphgrow {

inline constexpr unsigned char kFontAscii[95][8] = {
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+0020  
    {0x30, 0x30, 0x30, 0x30, 0x00, 0x30, 0x00, 0x00},  // U+0021 !
    {0x6C, 0x6C, 0x48, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+0022 "
    {0x6C, 0x6C, 0xFF, 0x6C, 0xFF, 0x6C, 0x6C, 0x00},  // U+0023 #
    {0x30, 0x7E, 0xC0, 0x7C, 0x0C, 0xFC, 0x30, 0x00},  // U+0024 $
    {0x00, 0xC6, 0xCC, 0x18, 0x30, 0x66, 0xC6, 0x00},  // U+0025 %
    {0x70, 0xD8, 0x70, 0xEC, 0xDC, 0xCC, 0x76, 0x00},  // U+0026 &
    {0x30, 0x30, 0x60, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+0027 '
    {0x18, 0x30, 0x60, 0x60, 0x60, 0x30, 0x18, 0x00},  // U+0028 (
    {0x60, 0x30, 0x18, 0x18, 0x18, 0x30, 0x60, 0x00},  // U+0029 )
    {0x00, 0x66, 0x3C, 0xFF, 0x3C, 0x66, 0x00, 0x00},  // U+002A *
    {0x00, 0x30, 0x30, 0xFC, 0x30, 0x30, 0x00, 0x00},  // U+002B +
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x30, 0x30, 0x60},  // U+002C ,
    {0x00, 0x00, 0x00, 0xFC, 0x00, 0x00, 0x00, 0x00},  // U+002D -
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x30, 0x30, 0x00},  // U+002E .
    {0x06, 0x0C, 0x18, 0x30, 0x60, 0xC0, 0x80, 0x00},  // U+002F /
    {0x7C, 0xC6, 0xCE, 0xD6, 0xE6, 0xC6, 0x7C, 0x00},  // U+0030 0
    {0x30, 0x70, 0x30, 0x30, 0x30, 0x30, 0xFC, 0x00},  // U+0031 1
    {0x7C, 0xC6, 0x06, 0x1C, 0x60, 0xC6, 0xFE, 0x00},  // U+0032 2
    {0x7C, 0xC6, 0x06, 0x3C, 0x06, 0xC6, 0x7C, 0x00},  // U+0033 3
    {0x1C, 0x3C, 0x6C, 0xCC, 0xFE, 0x0C, 0x1E, 0x00},  // U+0034 4
    {0xFE, 0xC0, 0xFC, 0x06, 0x06, 0xC6, 0x7C, 0x00},  // U+0035 5
    {0x38, 0x60, 0xC0, 0xFC, 0xC6, 0xC6, 0x7C, 0x00},  // U+0036 6
    {0xFE, 0xC6, 0x06, 0x0C, 0x18, 0x30, 0x30, 0x00},  // U+0037 7
    {0x7C, 0xC6, 0xC6, 0x7C, 0xC6, 0xC6, 0x7C, 0x00},  // U+0038 8
    {0x7C, 0xC6, 0xC6, 0x7E, 0x06, 0x0C, 0x70, 0x00},  // U+0039 9
    {0x00, 0x30, 0x30, 0x00, 0x30, 0x30, 0x00, 0x00},  // U+003A :
    {0x00, 0x30, 0x30, 0x00, 0x30, 0x30, 0x60, 0x00},  // U+003B ;
    {0x0C, 0x18, 0x30, 0x60, 0x30, 0x18, 0x0C, 0x00},  // U+003C <
    {0x00, 0x00, 0xFC, 0x00, 0xFC, 0x00, 0x00, 0x00},  // U+003D =
    {0x60, 0x30, 0x18, 0x0C, 0x18, 0x30, 0x60, 0x00},  // U+003E >
    {0x7C, 0xC6, 0x06, 0x18, 0x30, 0x00, 0x30, 0x00},  // U+003F ?
    {0x7C, 0xC6, 0xDE, 0xDE, 0xDE, 0xC0, 0x78, 0x00},  // U+0040 @
    {0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC, 0x00},  // U+0041 A
    {0xFC, 0x66, 0x66, 0x7C, 0x66, 0x66, 0xFC, 0x00},  // U+0042 B
    {0x3C, 0x66, 0xC0, 0xC0, 0xC0, 0x66, 0x3C, 0x00},  // U+0043 C
    {0xF8, 0x6C, 0x66, 0x66, 0x66, 0x6C, 0xF8, 0x00},  // U+0044 D
    {0xFE, 0x62, 0x68, 0x78, 0x68, 0x62, 0xFE, 0x00},  // U+0045 E
    {0xFE, 0x62, 0x68, 0x78, 0x68, 0x60, 0xF0, 0x00},  // U+0046 F
    {0x3C, 0x66, 0xC0, 0xC0, 0xCE, 0x66, 0x3E, 0x00},  // U+0047 G
    {0xCC, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC, 0xCC, 0x00},  // U+0048 H
    {0xF0, 0x60, 0x60, 0x60, 0x60, 0x60, 0xF0, 0x00},  // U+0049 I
    {0x3C, 0x18, 0x18, 0x18, 0xD8, 0xD8, 0x70, 0x00},  // U+004A J
    {0xE6, 0x66, 0x6C, 0x78, 0x6C, 0x66, 0xE6, 0x00},  // U+004B K
    {0xF0, 0x60, 0x60, 0x60, 0x62, 0x66, 0xFE, 0x00},  // U+004C L
    {0xC6, 0xEE, 0xFE, 0xD6, 0xC6, 0xC6, 0xC6, 0x00},  // U+004D M
    {0xC6, 0xE6, 0xF6, 0xDE, 0xCE, 0xC6, 0xC6, 0x00},  // U+004E N
    {0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38, 0x00},  // U+004F O
    {0xFC, 0x66, 0x66, 0x7C, 0x60, 0x60, 0xF0, 0x00},  // U+0050 P
    {0x38, 0x6C, 0xC6, 0xC6, 0xD6, 0x6C, 0x3B, 0x00},  // U+0051 Q
    {0xFC, 0x66, 0x66, 0x7C, 0x6C, 0x66, 0xE6, 0x00},  // U+0052 R
    {0x7C, 0xC6, 0x60, 0x18, 0x06, 0xC6, 0x7C, 0x00},  // U+0053 S
    {0xFC, 0xB2, 0x30, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+0054 T
    {0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0x78, 0x00},  // U+0055 U
    {0xC6, 0xC6, 0xC6, 0xC6, 0xC6, 0x6C, 0x38, 0x00},  // U+0056 V
    {0xC6, 0xC6, 0xC6, 0xD6, 0xFE, 0xEE, 0xC6, 0x00},  // U+0057 W
    {0xC6, 0xC6, 0x6C, 0x38, 0x6C, 0xC6, 0xC6, 0x00},  // U+0058 X
    {0xC6, 0xC6, 0x6C, 0x38, 0x30, 0x30, 0x78, 0x00},  // U+0059 Y
    {0xFE, 0xC6, 0x8C, 0x18, 0x32, 0x63, 0xFE, 0x00},  // U+005A Z
    {0x78, 0x60, 0x60, 0x60, 0x60, 0x60, 0x78, 0x00},  // U+005B [
    {0x80, 0xC0, 0x60, 0x30, 0x18, 0x0C, 0x06, 0x00},  // U+005C ?
    {0x78, 0x18, 0x18, 0x18, 0x18, 0x18, 0x78, 0x00},  // U+005D ]
    {0x10, 0x38, 0x6C, 0xC6, 0x00, 0x00, 0x00, 0x00},  // U+005E ^
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xFF},  // U+005F _
    {0x30, 0x18, 0x08, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+0060 `
    {0x00, 0x00, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+0061 a
    {0xE0, 0x60, 0x7C, 0x66, 0x66, 0x66, 0xFC, 0x00},  // U+0062 b
    {0x00, 0x00, 0x7C, 0xC0, 0xC0, 0xC6, 0x7C, 0x00},  // U+0063 c
    {0x1C, 0x0C, 0x7E, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+0064 d
    {0x00, 0x00, 0x7C, 0xC6, 0xFC, 0xC0, 0x7C, 0x00},  // U+0065 e
    {0x1C, 0x36, 0x30, 0x7C, 0x30, 0x30, 0x78, 0x00},  // U+0066 f
    {0x00, 0x00, 0x76, 0xCC, 0xCC, 0x7C, 0x0C, 0x78},  // U+0067 g
    {0xE0, 0x60, 0x6C, 0x76, 0x66, 0x66, 0xE6, 0x00},  // U+0068 h
    {0x30, 0x00, 0x70, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+0069 i
    {0x0C, 0x00, 0x1C, 0x0C, 0x0C, 0xCC, 0xCC, 0x78},  // U+006A j
    {0xE0, 0x60, 0x66, 0x6C, 0x78, 0x6C, 0xE6, 0x00},  // U+006B k
    {0x70, 0x30, 0x30, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+006C l
    {0x00, 0x00, 0xCC, 0xFE, 0xD6, 0xD6, 0xC6, 0x00},  // U+006D m
    {0x00, 0x00, 0xFC, 0x66, 0x66, 0x66, 0x66, 0x00},  // U+006E n
    {0x00, 0x00, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+006F o
    {0x00, 0x00, 0xFC, 0x66, 0x66, 0x7C, 0x60, 0xF0},  // U+0070 p
    {0x00, 0x00, 0x7E, 0xCC, 0xCC, 0x7C, 0x0C, 0x1E},  // U+0071 q
    {0x00, 0x00, 0xEC, 0x76, 0x66, 0x60, 0xF0, 0x00},  // U+0072 r
    {0x00, 0x00, 0x7C, 0xC0, 0x78, 0x06, 0xF8, 0x00},  // U+0073 s
    {0x20, 0x60, 0xF8, 0x60, 0x60, 0x64, 0x38, 0x00},  // U+0074 t
    {0x00, 0x00, 0xCC, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+0075 u
    {0x00, 0x00, 0xC6, 0xC6, 0xC6, 0x6C, 0x38, 0x00},  // U+0076 v
    {0x00, 0x00, 0xC6, 0xD6, 0xD6, 0xFE, 0x6C, 0x00},  // U+0077 w
    {0x00, 0x00, 0xC6, 0x6C, 0x38, 0x6C, 0xC6, 0x00},  // U+0078 x
    {0x00, 0x00, 0xCC, 0xCC, 0xCC, 0x7C, 0x0C, 0xF8},  // U+0079 y
    {0x00, 0x00, 0xFC, 0x98, 0x30, 0x64, 0xFC, 0x00},  // U+007A z
    {0x1C, 0x30, 0x30, 0x60, 0x30, 0x30, 0x1C, 0x00},  // U+007B {
    {0x18, 0x18, 0x18, 0x18, 0x18, 0x18, 0x18, 0x00},  // U+007C |
    {0xE0, 0x30, 0x30, 0x18, 0x30, 0x30, 0xE0, 0x00},  // U+007D }
    {0x76, 0xDC, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+007E ~
};

inline constexpr unsigned char kFontLatin1[96][8] = {
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+00A0 ?
    {0x30, 0x00, 0x30, 0x30, 0x30, 0x30, 0x30, 0x00},  // U+00A1 ¡
    {0x30, 0x7C, 0xC0, 0xC0, 0xC0, 0x7C, 0x30, 0x00},  // U+00A2 ¢
    {0x3C, 0x66, 0x60, 0xF0, 0x60, 0x62, 0xFE, 0x00},  // U+00A3 £
    {0x00, 0xC6, 0x7C, 0x6C, 0x7C, 0xC6, 0x00, 0x00},  // U+00A4 ¤
    {0xC6, 0x6C, 0x38, 0xFC, 0x30, 0xFC, 0x30, 0x00},  // U+00A5 ¥
    {0x18, 0x18, 0x18, 0x00, 0x18, 0x18, 0x18, 0x00},  // U+00A6 ¦
    {0x7C, 0xC0, 0x78, 0xC6, 0x78, 0x06, 0xF8, 0x00},  // U+00A7 §
    {0x6C, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+00A8 ¨
    {0x7C, 0x82, 0x9D, 0xA2, 0x9D, 0x82, 0x7C, 0x00},  // U+00A9 ©
    {0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00, 0xFC, 0x00},  // U+00AA ª
    {0x00, 0x36, 0x6C, 0xD8, 0x6C, 0x36, 0x00, 0x00},  // U+00AB «
    {0x00, 0x00, 0xFC, 0x06, 0x06, 0x00, 0x00, 0x00},  // U+00AC ¬
    {0x00, 0x00, 0x00, 0x78, 0x00, 0x00, 0x00, 0x00},  // U+00AD ?
    {0x7C, 0x82, 0xB9, 0xAA, 0xBA, 0xAA, 0x7C, 0x00},  // U+00AE ®
    {0xFF, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+00AF ¯
    {0x38, 0x6C, 0x38, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+00B0 °
    {0x30, 0xFC, 0x30, 0x00, 0xFC, 0x00, 0x00, 0x00},  // U+00B1 ±
    {0x70, 0x18, 0x30, 0x7C, 0x00, 0x00, 0x00, 0x00},  // U+00B2 ²
    {0x70, 0x18, 0x38, 0x18, 0x70, 0x00, 0x00, 0x00},  // U+00B3 ³
    {0x18, 0x30, 0x40, 0x00, 0x00, 0x00, 0x00, 0x00},  // U+00B4 ´
    {0x00, 0x00, 0xCC, 0xCC, 0xCC, 0xFC, 0xC0, 0x80},  // U+00B5 µ
    {0x7F, 0xED, 0xED, 0x6D, 0x2D, 0x2D, 0x2D, 0x00},  // U+00B6 ¶
    {0x00, 0x00, 0x00, 0x30, 0x30, 0x00, 0x00, 0x00},  // U+00B7 ·
    {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x18, 0x30},  // U+00B8 ¸
    {0x30, 0x70, 0x30, 0x78, 0x00, 0x00, 0x00, 0x00},  // U+00B9 ¹
    {0x78, 0xCC, 0xCC, 0x78, 0x00, 0xFC, 0x00, 0x00},  // U+00BA º
    {0x00, 0xD8, 0x6C, 0x36, 0x6C, 0xD8, 0x00, 0x00},  // U+00BB »
    {0xC2, 0xC6, 0x0C, 0x1A, 0x36, 0x6F, 0xC3, 0x00},  // U+00BC ¼
    {0xC2, 0xC6, 0x0C, 0x1F, 0x31, 0x66, 0xCF, 0x00},  // U+00BD ½
    {0xE2, 0xA6, 0xEC, 0x1A, 0x36, 0x6F, 0xC3, 0x00},  // U+00BE ¾
    {0x30, 0x00, 0x30, 0x30, 0x60, 0xC6, 0x7C, 0x00},  // U+00BF ¿
    {0x30, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C0 À
    {0x18, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C1 Á
    {0x18, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C2 Â
    {0x76, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C3 Ã
    {0x6C, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C4 Ä
    {0x30, 0x30, 0x78, 0xCC, 0xCC, 0xFC, 0xCC, 0xCC},  // U+00C5 Å
    {0x3E, 0x6C, 0xCC, 0xFE, 0xCE, 0xCC, 0xCF, 0x00},  // U+00C6 Æ
    {0x3C, 0x66, 0xC0, 0xC0, 0x66, 0x3C, 0x18, 0x30},  // U+00C7 Ç
    {0x30, 0xFE, 0x62, 0x68, 0x78, 0x68, 0x62, 0xFE},  // U+00C8 È
    {0x18, 0xFE, 0x62, 0x68, 0x78, 0x68, 0x62, 0xFE},  // U+00C9 É
    {0x18, 0xFE, 0x62, 0x68, 0x78, 0x68, 0x62, 0xFE},  // U+00CA Ê
    {0x6C, 0xFE, 0x62, 0x68, 0x78, 0x68, 0x62, 0xFE},  // U+00CB Ë
    {0x30, 0xF0, 0x60, 0x60, 0x60, 0x60, 0x60, 0xF0},  // U+00CC Ì
    {0x18, 0xF0, 0x60, 0x60, 0x60, 0x60, 0x60, 0xF0},  // U+00CD Í
    {0x18, 0xF0, 0x60, 0x60, 0x60, 0x60, 0x60, 0xF0},  // U+00CE Î
    {0x6C, 0xF0, 0x60, 0x60, 0x60, 0x60, 0x60, 0xF0},  // U+00CF Ï
    {0xF8, 0x6C, 0x66, 0xF6, 0x66, 0x6C, 0xF8, 0x00},  // U+00D0 Ð
    {0x76, 0xC6, 0xE6, 0xF6, 0xDE, 0xCE, 0xC6, 0xC6},  // U+00D1 Ñ
    {0x30, 0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38},  // U+00D2 Ò
    {0x18, 0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38},  // U+00D3 Ó
    {0x18, 0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38},  // U+00D4 Ô
    {0x76, 0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38},  // U+00D5 Õ
    {0x6C, 0x38, 0x6C, 0xC6, 0xC6, 0xC6, 0x6C, 0x38},  // U+00D6 Ö
    {0x00, 0xC6, 0x6C, 0x38, 0x6C, 0xC6, 0x00, 0x00},  // U+00D7 ×
    {0x3B, 0x6E, 0xCE, 0xD6, 0xE6, 0x76, 0xDC, 0x00},  // U+00D8 Ø
    {0x30, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0x78},  // U+00D9 Ù
    {0x18, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0x78},  // U+00DA Ú
    {0x18, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0x78},  // U+00DB Û
    {0x6C, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0xCC, 0x78},  // U+00DC Ü
    {0x18, 0xC6, 0xC6, 0x6C, 0x38, 0x30, 0x30, 0x78},  // U+00DD Ý
    {0xF0, 0x60, 0x7C, 0x66, 0x7C, 0x60, 0xF0, 0x00},  // U+00DE Þ
    {0x78, 0xCC, 0xD8, 0xCC, 0xC6, 0xCC, 0x98, 0x00},  // U+00DF ß
    {0x30, 0x18, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E0 à
    {0x18, 0x30, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E1 á
    {0x18, 0x28, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E2 â
    {0x76, 0x00, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E3 ã
    {0x6C, 0x00, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E4 ä
    {0x30, 0x30, 0x78, 0x0C, 0x7C, 0xCC, 0x76, 0x00},  // U+00E5 å
    {0x00, 0x00, 0xDC, 0x26, 0x7E, 0xD0, 0x6E, 0x00},  // U+00E6 æ
    {0x00, 0x00, 0x7C, 0xC0, 0xC0, 0x7C, 0x18, 0x30},  // U+00E7 ç
    {0x30, 0x18, 0x7C, 0xC6, 0xFC, 0xC0, 0x7C, 0x00},  // U+00E8 è
    {0x18, 0x30, 0x7C, 0xC6, 0xFC, 0xC0, 0x7C, 0x00},  // U+00E9 é
    {0x18, 0x28, 0x7C, 0xC6, 0xFC, 0xC0, 0x7C, 0x00},  // U+00EA ê
    {0x6C, 0x00, 0x7C, 0xC6, 0xFC, 0xC0, 0x7C, 0x00},  // U+00EB ë
    {0x30, 0x18, 0x70, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+00EC ì
    {0x18, 0x30, 0x70, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+00ED í
    {0x18, 0x28, 0x70, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+00EE î
    {0x6C, 0x00, 0x70, 0x30, 0x30, 0x30, 0x78, 0x00},  // U+00EF ï
    {0x36, 0x1C, 0x2C, 0x1E, 0x66, 0x66, 0x3C, 0x00},  // U+00F0 ð
    {0x76, 0x00, 0xFC, 0x66, 0x66, 0x66, 0x66, 0x00},  // U+00F1 ñ
    {0x30, 0x18, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+00F2 ò
    {0x18, 0x30, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+00F3 ó
    {0x18, 0x28, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+00F4 ô
    {0x76, 0x00, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+00F5 õ
    {0x6C, 0x00, 0x7C, 0xC6, 0xC6, 0xC6, 0x7C, 0x00},  // U+00F6 ö
    {0x00, 0x30, 0x00, 0xFC, 0x00, 0x30, 0x00, 0x00},  // U+00F7 ÷
    {0x00, 0x00, 0x7B, 0xCE, 0xD6, 0xE6, 0xDE, 0x00},  // U+00F8 ø
    {0x30, 0x18, 0xCC, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+00F9 ù
    {0x18, 0x30, 0xCC, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+00FA ú
    {0x18, 0x28, 0xCC, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+00FB û
    {0x6C, 0x00, 0xCC, 0xCC, 0xCC, 0xCC, 0x76, 0x00},  // U+00FC ü
    {0x18, 0x30, 0xCC, 0xCC, 0xCC, 0x7C, 0x0C, 0xF8},  // U+00FD ý
    {0xE0, 0x60, 0x7C, 0x66, 0x66, 0x7C, 0x60, 0xF0},  // U+00FE þ
    {0x6C, 0x00, 0xCC, 0xCC, 0xCC, 0x7C, 0x0C, 0xF8},  // U+00FF ÿ
};

}  // namespace glyphgrow
