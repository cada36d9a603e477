"""Chebyshev tables for real-argument Bessel functions.

Generated by tools/gen_bessel_tables.py; do not edit by hand.
"""

J0_SMALL = [
    0.0023409898253245365,
    -0.4942050934095248,
    0.3979373672320759,
    -0.09383145879659434,
    0.010887531648681469,
    -0.0007606267657736917,
    3.569483646389097e-05,
    -1.2060697061934153e-06,
    3.0790385943229275e-08,
    -6.15440706392852e-10,
    9.899100271235447e-12,
    -1.3116543178870125e-13,
    1.6453320382314824e-15,
    -3.3263765180706615e-16,
    1.6121993520166333e-17,
    -2.204479717493447e-16,
    -3.220300218006898e-17,
    -5.122116347286834e-17,
    -1.4654303166508654e-16,
    2.0551935304381714e-16,
    -3.638665055129198e-16,
    2.2841096735395357e-16,
    -4.747193637450797e-16,
    -1.3617405850795335e-16,
    -1.8383333331977554e-16,
    -2.513536906591455e-16,
    -7.421292317190849e-16,
    -3.0726430140239245e-16,
    -3.796390865870203e-16,
    -3.603431142733425e-16,
    3.438905102717238e-17,
    -7.028525200781548e-16,
    3.59776962925648e-16,
    -9.286405382757352e-17,
    1.1525870926177894e-16,
]

J1_SMALL = [
    0.12472176826504339,
    -0.2686845684799195,
    0.09129790663903899,
    -0.014004653451391198,
    0.0012197061943090893,
    -6.861294107943435e-05,
    2.703369071612923e-06,
    -7.885506927657138e-08,
    1.7729299039269012e-09,
    -3.168184605534502e-11,
    4.610418944931719e-13,
    -5.598188533379654e-15,
    1.1845089748401575e-16,
    -1.1431273617381502e-16,
    -5.2923560319922434e-17,
    2.077064992065674e-17,
    -5.487642327116602e-17,
    -6.382392980183378e-17,
    -1.1527236917758018e-16,
    -2.373658173379577e-17,
    -1.409581082918174e-16,
    5.0316533639683114e-17,
    -1.7458199064562914e-16,
    -4.5213934805884084e-17,
    -3.013462723590704e-17,
    -1.8985033472464252e-17,
    -2.50432716419324e-16,
    -3.647096769474414e-17,
    -1.2476673390019406e-16,
    -7.628007734795666e-17,
    5.1704113650156174e-17,
    -2.848821483967739e-16,
    1.5156366259646058e-16,
    -4.672335017853089e-17,
]

Y0_SMALL = [
    0.2070855877310458,
    -0.34825369857677213,
    -0.11629642118048662,
    0.06127775921116569,
    -0.00947480574280637,
    0.0007808203004994425,
    -4.102414780274126e-05,
    1.5084665389725232e-06,
    -4.117739959512438e-08,
    8.696446416920336e-10,
    -1.4653607464247067e-11,
    2.018332128641019e-13,
    -2.259662658392795e-15,
    -1.2975109859115822e-17,
    -1.3627753808894732e-16,
    1.405061027799607e-16,
    -1.5219732535487085e-16,
    -1.2287982116870615e-16,
    -6.876599467102702e-17,
    -2.139576961943873e-16,
    -1.429662553214355e-17,
    -1.0870469002012734e-17,
    4.8355601217144684e-17,
    2.38319422392635e-17,
    1.4677525869333344e-16,
    2.930695926127238e-16,
    -7.80265708241288e-17,
    1.0915459129117108e-16,
    -8.839580894361513e-17,
    -1.0272737668466468e-17,
    7.046811566280639e-17,
    -1.2858425091418878e-16,
    1.0379601991499737e-16,
    -1.1114248452236175e-16,
    -1.8109833761724865e-16,
]

Y1_SMALL = [
    0.10814356944253688,
    0.02333174691003011,
    -0.04805615183492803,
    0.010931259695855696,
    -0.001167564040130904,
    7.498061541191952e-05,
    -3.252156350615386e-06,
    1.0219630565845592e-07,
    -2.440540932972427e-09,
    4.5865089383473824e-11,
    -6.967052845324129e-13,
    8.761171682527412e-15,
    -1.000256681951594e-16,
    3.796282205618232e-17,
    -1.8060397286611778e-18,
    2.5881073878736204e-17,
    -6.751270995683193e-18,
    2.507096206881841e-18,
    1.728461236665126e-17,
    -3.013032898220559e-17,
    4.0373654862544825e-17,
    -2.1401584263193137e-17,
    6.445122916995388e-17,
    1.6184094280431334e-17,
    2.920931524072621e-17,
    5.462914468431466e-17,
    7.92427239207219e-17,
    3.1763632585421085e-17,
    2.4252030389592148e-17,
    3.01049196832039e-17,
    4.143828135079894e-18,
    5.742285624612261e-17,
]

P0_LARGE = [
    0.9986523398776956,
    -0.0013293716212502615,
    1.761305551291402e-05,
    -6.319367118712256e-07,
    3.948825587119457e-08,
    -3.5409678823140585e-09,
    4.103246435405687e-10,
    -5.7657467266392446e-11,
    9.423126607655768e-12,
    -1.7401462910436372e-12,
    3.555958033192808e-13,
    -7.913171038764748e-14,
    1.898204524434384e-14,
    -4.819418700302554e-15,
    1.3236332188948171e-15,
    -3.739722730419435e-16,
    1.323830818615813e-16,
]

Q0_LARGE = [
    -0.12364702582167493,
    0.0013190194049922646,
    -3.218799121265914e-05,
    1.6237093205676115e-06,
    -1.274328974164557e-07,
    1.3513032765975175e-08,
    -1.7850759020952482e-09,
    2.790857167562585e-10,
    -4.988907568439368e-11,
    9.950717220059874e-12,
    -2.1751176132512213e-12,
    5.140160803380288e-13,
    -1.2992883744987433e-13,
    3.484061000857211e-14,
    -9.837091995767534e-15,
    2.9141938861686874e-15,
    -8.961842771863766e-16,
    2.9144975280408426e-16,
    -9.45184526822205e-17,
    3.5022662809232983e-17,
]

P1_LARGE = [
    1.00226762068534,
    0.0022437352958079777,
    -2.30710188625763e-05,
    7.639181731940656e-07,
    -4.589685236948644e-08,
    4.020515442583443e-09,
    -4.5867746073864056e-10,
    6.373153344647049e-11,
    -1.0327382800355259e-11,
    1.8942893177047485e-12,
    -3.8499186192406603e-13,
    8.526201242739056e-14,
    -2.0391633239937303e-14,
    5.1234459737989545e-15,
    -1.4073488344587135e-15,
    3.535067597742189e-16,
    -1.2909396686829773e-16,
    2.7890838319877875e-18,
    -3.074200434859775e-17,
    -1.6863107114958887e-17,
    -3.109687183756829e-17,
    -3.530025407735447e-17,
    -5.1827953404014724e-18,
    -3.689963387655502e-17,
    -5.459671141085908e-17,
]

Q1_LARGE = [
    0.3730873462146865,
    -0.0018705189681051378,
    4.0056994520472035e-05,
    -1.91440283908051e-06,
    1.4588165107811244e-07,
    -1.5183398640168098e-08,
    1.979922264215268e-09,
    -3.065981384397002e-10,
    5.440234469918824e-11,
    -1.0786650906247326e-11,
    2.3463623698169944e-12,
    -5.521984389189772e-13,
    1.3910121620651673e-13,
    -3.717281288499625e-14,
    1.0483454759568335e-14,
    -3.0845265937048106e-15,
    9.672499893643046e-16,
    -3.052810615800208e-16,
    1.128746482129619e-16,
]
