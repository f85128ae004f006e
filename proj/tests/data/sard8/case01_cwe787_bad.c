void fill_ids(int *ids, int n)
{
    int local[8];
    for (int i = 0; i <= n && i <= 8; i++)
        local[i] = ids[i];
    submit(local, n);
}
